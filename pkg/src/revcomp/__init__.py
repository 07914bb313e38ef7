"""Reversible computation: machines, pebble games, simulators, accounting."""
