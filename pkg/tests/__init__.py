"""Tests for motivic-ie."""
