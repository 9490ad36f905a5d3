"""Tests for fastuplink."""
