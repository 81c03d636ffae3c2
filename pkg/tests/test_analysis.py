"""Closed-form rates and bounds, checked against Monte Carlo.

Every formula with content gets an independent numerical check here:
fresh-draw frequencies for the badness probabilities, a Galton-Watson
simulation for the percolation quantities, and a bisection root solve
for the critical softness. Frozen decimal values pin the constants the
rest of the suite relies on.
"""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from softcolor.analysis import (
    alpha,
    bernoulli_bound,
    effective_level_count,
    expected_bad_graph,
    expected_bad_regular,
    expected_cluster_size,
    gamma_critical,
    k_hybrid_bound,
    k_sufficient,
    lll_margin,
    lll_satisfied,
    nrs_component_acceptance_bound,
    nrs_fullgraph_expected_iterations_bound,
    p_bad_general,
    p_bad_regular,
    p_passive,
    percolation_decay_rate,
    site_open_probability,
)
from softcolor.errors import ParameterError, SupercriticalError
from softcolor.graph import (
    complete_graph,
    cycle_graph,
    from_edges,
    grid_graph,
    petersen_graph,
    random_regular_graph,
)
from softcolor.rng import RandomStream
from softcolor.softstate import bad_mask, sample_reference

from conftest import BATTERY_SEED, fresh_generator


class TestFrozenConstants:
    def test_critical_gamma_values(self):
        assert round(gamma_critical(3), 3) == 0.794
        assert round(gamma_critical(4), 3) == 0.904
        assert round(gamma_critical(5), 3) == 0.944

    def test_sufficient_colors_values(self):
        assert round(k_sufficient(3), 1) == 7.6
        assert round(k_sufficient(4), 1) == 5.6
        assert round(k_sufficient(15), 1) == 3.2

    def test_decay_rate_value(self):
        assert round(percolation_decay_rate(0.95, 4), 2) == 0.59

    def test_effective_level_counts(self):
        assert effective_level_count(0.9, 4) == 0
        assert effective_level_count(0.99, 4) == 10
        assert effective_level_count(0.9, 3) == 2

    def test_expected_bad_point(self):
        assert expected_bad_regular(1000, 0.93, 3, 15) == pytest.approx(
            2.736502, abs=5e-6
        )
        assert expected_bad_regular(5000, 0.89, 3, 15) == pytest.approx(
            32.383, abs=5e-3
        )

    def test_cluster_size_point(self):
        assert expected_cluster_size(0.93, 3) == pytest.approx(1.643, abs=5e-4)

    def test_nrs_bounds(self):
        assert nrs_fullgraph_expected_iterations_bound(4, 20) == pytest.approx(
            (4 / 3) ** 20
        )
        assert nrs_component_acceptance_bound(10, 0.95, 4, 20) == pytest.approx(
            0.981450625, abs=1e-9
        )

    def test_hybrid_color_bound_point(self):
        assert k_hybrid_bound(0.95, 4) == pytest.approx(0.0633, rel=2e-3)


class TestAlgebraicRelations:
    @settings(max_examples=120, deadline=None)
    @given(
        gamma=st.floats(min_value=0.0, max_value=1.0, allow_nan=False),
        delta=st.integers(min_value=1, max_value=8),
        k=st.integers(min_value=1, max_value=25),
    )
    def test_alpha_and_badness(self, gamma, delta, k):
        a = alpha(gamma, delta, k)
        assert 0.0 <= a <= 1.0 / k
        p = p_bad_regular(gamma, delta, k)
        assert p == pytest.approx(1.0 - (1.0 - a) ** delta)
        assert 0.0 <= p <= 1.0
        assert p <= bernoulli_bound(gamma, delta, k) + 1e-12
        same = p_bad_general(gamma, [delta] * delta, k)
        assert same == pytest.approx(p)

    @settings(max_examples=60, deadline=None)
    @given(
        delta=st.integers(min_value=1, max_value=8),
        k=st.integers(min_value=2, max_value=25),
        lo=st.floats(min_value=0.0, max_value=0.98, allow_nan=False),
        bump=st.floats(min_value=1e-3, max_value=0.5, allow_nan=False),
    )
    def test_badness_monotone_in_gamma_and_k(self, delta, k, lo, bump):
        hi = min(1.0, lo + bump)
        assert p_bad_regular(hi, delta, k) <= p_bad_regular(lo, delta, k) + 1e-12
        assert p_bad_regular(lo, delta, k) <= p_bad_regular(lo, delta, k - 1) + 1e-12

    def test_edge_gammas(self):
        assert alpha(1.0, 4, 7) == 0.0
        assert p_bad_regular(1.0, 4, 7) == 0.0
        assert alpha(0.0, 4, 7) == pytest.approx(1 / 7)
        assert site_open_probability(1.0, 5) == 0.0
        assert site_open_probability(0.0, 5) == 1.0
        assert p_passive(0.7, 0) == 1.0  # isolated vertices are always passive

    def test_site_open_complements_passivity(self):
        for gamma in (0.2, 0.55, 0.93):
            for d in (1, 3, 6):
                assert site_open_probability(gamma, d) == pytest.approx(
                    1.0 - p_passive(gamma, d)
                )

    def test_regular_graph_expectation_consistency(self):
        for g, k in ((petersen_graph(), 7), (cycle_graph(9), 4), (complete_graph(5), 8)):
            d = int(g.max_degree)
            assert expected_bad_graph(g, 0.8, k) == pytest.approx(
                expected_bad_regular(g.n, 0.8, d, k)
            )

    def test_parameter_guards(self):
        with pytest.raises(ParameterError):
            alpha(-0.1, 3, 5)
        with pytest.raises(ParameterError):
            alpha(1.1, 3, 5)
        assert alpha(0.5, 0, 5) == 0.0  # degree 0 is legal, never conflicts
        with pytest.raises(ParameterError):
            alpha(0.5, -1, 5)
        with pytest.raises(ParameterError):
            alpha(0.5, 3, 0)
        with pytest.raises(ParameterError):
            p_bad_general(0.5, [2, 0], 5)
        with pytest.raises(ParameterError):
            percolation_decay_rate(0.95, 2)
        with pytest.raises(ParameterError):
            nrs_fullgraph_expected_iterations_bound(1, 5)
        with pytest.raises(ParameterError):
            nrs_component_acceptance_bound(0, 0.9, 3, 10)
        with pytest.raises(ParameterError):
            effective_level_count(1.0, 4)

    def test_supercritical_rejections(self):
        with pytest.raises(SupercriticalError):
            percolation_decay_rate(0.90, 4)  # just below the 0.904 threshold
        with pytest.raises(SupercriticalError):
            expected_cluster_size(0.79, 3)
        with pytest.raises(SupercriticalError):
            k_hybrid_bound(0.75, 3)
        # just above the threshold everything is finite and positive
        g = gamma_critical(4) + 1e-3
        assert percolation_decay_rate(g, 4) > 0
        assert expected_cluster_size(g, 4) > 1


class TestCriticalGamma:
    def test_root_of_branching_mean(self):
        """gamma_critical solves q(gamma) * (delta-1) = 1; find the root
        numerically without using the closed form."""
        for delta in (3, 4, 5, 8, 15):
            root = brentq(
                lambda g: site_open_probability(g, delta) * (delta - 1) - 1.0,
                1e-9,
                1.0 - 1e-12,
            )
            assert root == pytest.approx(gamma_critical(delta), abs=1e-10)

    def test_effective_levels_match_loop_count(self):
        for base in (0.99, 0.95, 0.9, 0.8, 0.5):
            for delta in (3, 4, 5, 6, 8):
                gc = gamma_critical(delta)
                level, count = 1, 0
                while base**level > gc:
                    count += 1
                    level += 1
                assert effective_level_count(base, delta) == count

    def test_sufficient_colors_verify_the_feasibility_product(self):
        for delta in (3, 4, 5, 15):
            ks = k_sufficient(delta)
            gc = gamma_critical(delta)
            assert not lll_satisfied(gc, delta, max(2, math.floor(0.5 * ks)))
            assert lll_satisfied(gc, delta, math.ceil(1.1 * ks))
            assert lll_margin(gc, delta, math.ceil(1.1 * ks)) <= 1.0


# ------------------------------------------------------- Monte Carlo


def _mc_bad_fraction(graph, gamma, k, trials, seed):
    """Per-trial fraction of bad vertices under fresh product draws."""
    root = RandomStream(seed)
    fractions = np.empty(trials)
    for t in range(trials):
        state = sample_reference(graph, k, root.child(t))
        fractions[t] = bad_mask(state, graph, gamma).mean()
    return fractions


class TestMonteCarloBadness:
    def test_regular_badness_probability(self):
        g = petersen_graph()
        gamma, k = 0.8, 4
        fr = _mc_bad_fraction(g, gamma, k, trials=4000, seed=BATTERY_SEED + 31)
        target = p_bad_regular(gamma, 3, k)
        se = fr.std(ddof=1) / math.sqrt(len(fr))
        assert abs(fr.mean() - target) <= 3 * se

    def test_general_badness_on_a_star(self):
        g = from_edges(6, [(0, i) for i in range(1, 6)])
        gamma, k = 0.6, 3
        root = RandomStream(BATTERY_SEED + 32)
        trials = 20000
        hits = np.zeros(g.n)
        for t in range(trials):
            state = sample_reference(g, k, root.child(t))
            hits += bad_mask(state, g, gamma)
        for v in range(g.n):
            target = p_bad_general(
                gamma, [g.degree(w) for w in g.adjacency[v]], k
            )
            phat = hits[v] / trials
            se = math.sqrt(max(phat * (1 - phat), 1e-9) / trials)
            assert abs(phat - target) <= 4 * se

    def test_expected_bad_on_irregular_graph(self):
        g = grid_graph(4)
        gamma, k = 0.7, 5
        root = RandomStream(BATTERY_SEED + 33)
        trials = 4000
        totals = np.empty(trials)
        for t in range(trials):
            state = sample_reference(g, k, root.child(t))
            totals[t] = bad_mask(state, g, gamma).sum()
        target = expected_bad_graph(g, gamma, k)
        se = totals.std(ddof=1) / math.sqrt(trials)
        assert abs(totals.mean() - target) <= 3 * se

    def test_passivity_frequency(self):
        gen = fresh_generator(BATTERY_SEED + 34)
        gamma, d, trials = 0.7, 3, 200000
        phat = float((gen.random(trials) <= gamma**d).mean())
        se = math.sqrt(phat * (1 - phat) / trials)
        assert abs(phat - p_passive(gamma, d)) <= 3 * se


def _branching_walk(gen, offspring_n, q, max_depth, cap=100000):
    """Population trajectory of a Galton-Watson process with
    Binomial(offspring_n, q) offspring; returns (survived, total)."""
    pop, total = 1, 1
    for _ in range(max_depth):
        if pop == 0:
            return False, total
        if pop > cap:
            return True, total
        pop = int(gen.binomial(pop * offspring_n, q))
        total += pop
    return pop > 0, total


class TestPercolationMonteCarlo:
    def test_critical_threshold_separates_survival(self):
        delta = 3
        gc = gamma_critical(delta)
        gen = fresh_generator(BATTERY_SEED + 35)
        walks = 4000

        q_low = site_open_probability(gc - 0.04, delta)  # supercritical
        survived = sum(
            _branching_walk(gen, delta - 1, q_low, 50)[0] for _ in range(walks)
        )
        assert survived / walks > 0.02

        q_high = site_open_probability(gc + 0.04, delta)  # subcritical
        survived = sum(
            _branching_walk(gen, delta - 1, q_high, 50)[0] for _ in range(walks)
        )
        assert survived / walks < 0.005

    def test_mean_total_progeny(self):
        gamma, delta = 0.95, 3
        q = site_open_probability(gamma, delta)
        gen = fresh_generator(BATTERY_SEED + 36)
        totals = np.array(
            [_branching_walk(gen, delta - 1, q, 10000)[1] for _ in range(40000)],
            dtype=float,
        )
        target = expected_cluster_size(gamma, delta)
        se = totals.std(ddof=1) / math.sqrt(len(totals))
        assert abs(totals.mean() - target) <= 3 * se

    def test_cluster_tail_envelope_on_a_graph(self):
        """Open-cluster tail P(|C_v| >= s) on an actual 3-regular graph
        stays under exp(-c s) for the first few sizes. Larger s needs
        graph sizes outside test budget, so the check stops at 3."""
        gamma, delta = 0.93, 3
        g = random_regular_graph(2000, delta, seed=19)
        c = percolation_decay_rate(gamma, delta)
        thresholds = gamma ** g.degrees
        root = RandomStream(BATTERY_SEED + 37)
        trials = 300
        tail = {1: [], 2: [], 3: []}
        for t in range(trials):
            state = sample_reference(g, 15, root.child(t))
            open_mask = state.uniforms > thresholds
            size = np.zeros(g.n, dtype=np.int64)
            seen = np.zeros(g.n, dtype=bool)
            for v in range(g.n):
                if not open_mask[v] or seen[v]:
                    continue
                comp, stack = [v], [v]
                seen[v] = True
                while stack:
                    x = stack.pop()
                    for w in g.adjacency[x]:
                        if open_mask[w] and not seen[w]:
                            seen[w] = True
                            comp.append(w)
                            stack.append(w)
                size[comp] = len(comp)
            for s in tail:
                tail[s].append(float((size >= s).mean()))
        for s, samples in tail.items():
            arr = np.array(samples)
            se = arr.std(ddof=1) / math.sqrt(trials)
            assert arr.mean() + 3 * se <= math.exp(-c * s), (
                f"tail at s={s}: {arr.mean():.4f} vs bound {math.exp(-c * s):.4f}"
            )
