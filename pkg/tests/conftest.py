"""Shared fixtures: cached root systems, flat bases, and structural-check
reports, so the expensive exact solves run once per session."""

import pytest

from saitostrata import (build_root_system, flat_coordinates,
                         identity_field_checks)

_ROOT_CACHE = {}
_FLAT_CACHE = {}
_REPORT_CACHE = {}


@pytest.fixture(scope="session")
def root_system():
    def get(label, rank=None):
        key = (label, rank)
        if key not in _ROOT_CACHE:
            _ROOT_CACHE[key] = build_root_system(label, rank)
        return _ROOT_CACHE[key]
    return get


@pytest.fixture(scope="session")
def flat_basis(root_system):
    def get(label, rank):
        key = (label, rank)
        if key not in _FLAT_CACHE:
            _FLAT_CACHE[key] = flat_coordinates(root_system(label, rank))
        return _FLAT_CACHE[key]
    return get


@pytest.fixture(scope="session")
def identity_report(flat_basis):
    def get(label, rank):
        key = (label, rank)
        if key not in _REPORT_CACHE:
            _REPORT_CACHE[key] = identity_field_checks(flat_basis(label, rank))
        return _REPORT_CACHE[key]
    return get
