"""Beta tuning tests."""
