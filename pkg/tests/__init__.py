"""Tests for collisim."""
