"""Shared fixtures-adjacent utilities: deterministic randomness and the state corpus."""

import numpy as np

from aapt import (
    max_entangled,
    product_state,
    random_cq_state,
    random_density,
    random_state,
    unitary_faithful_state,
)

DIMS = [(2, 2), (2, 3), (3, 2), (3, 3), (2, 4), (4, 2)]

UNITARY_FAITHFUL_SPECTRA = {
    2: [(0.7, 0.3), (0.6, 0.4), (0.9, 0.1), (0.55, 0.45)],
    3: [(0.5, 0.3, 0.2), (0.6, 0.3, 0.1), (0.45, 0.35, 0.2), (0.7, 0.2, 0.1)],
    4: [(0.4, 0.3, 0.2, 0.1), (0.5, 0.25, 0.15, 0.1), (0.35, 0.3, 0.2, 0.15), (0.55, 0.25, 0.12, 0.08)],
}


def random_complex(shape, seed):
    g = np.random.default_rng(seed)
    return g.standard_normal(shape) + 1j * g.standard_normal(shape)


def build_corpus():
    """Deterministic zoo of probe states covering every family, 200+ entries."""
    states = [
        ("max_entangled_d2", max_entangled(2)),
        ("max_entangled_d3", max_entangled(3)),
    ]
    seed = 1000
    for da, db in DIMS:
        for k in range(8):
            states.append((f"pure_{da}x{db}_{k}", random_state(da, db, 1, seed)))
            seed += 1
    for da, db in DIMS:
        for k in range(10):
            states.append((f"mixed_{da}x{db}_{k}", random_state(da, db, None, seed)))
            seed += 1
    for da, db in DIMS:
        for k in range(2):
            states.append((f"lowrank_{da}x{db}_{k}", random_state(da, db, 2, seed)))
            seed += 1
    for da, db in DIMS:
        for k in range(8):
            g = np.random.default_rng(seed)
            rank_a = da if k % 2 == 0 else 1
            states.append(
                (f"product_{da}x{db}_{k}", product_state(random_density(da, rank_a, g), random_density(db, db, g)))
            )
            seed += 1
    for da in (2, 3, 4):
        for db in (2, 3):
            for k in range(4):
                states.append((f"cq_{da}x{db}_{k}", random_cq_state(da, db, seed)))
                seed += 1
    for d, spectra in UNITARY_FAITHFUL_SPECTRA.items():
        for i, spectrum in enumerate(spectra):
            states.append((f"unitary_faithful_d{d}_{i}", unitary_faithful_state(spectrum)))
    return states
