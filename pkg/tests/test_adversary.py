import random
from fractions import Fraction as F
from itertools import combinations, product

import pytest

from listprivacy import (
    ListEstimator,
    StochasticMatrix,
    list_privacy,
    map_list_estimator,
    optimal_binary_qr,
    privacy_bound,
    recoverability_level,
    ternary_example_qr,
    uniform_qr,
)
from listprivacy.adversary import report_to_jsonable, report_to_text
from listprivacy.catalog import instance as catalog_instance
from listprivacy.core import Instance
from listprivacy.errors import DimensionMismatch
from conftest import random_instance, random_mechanism, random_rho

SKEW7 = catalog_instance("skew7")
UNIFORM4 = catalog_instance("uniform4")
TERNARY5 = catalog_instance("ternary5")


def estimator_miss_probability(inst, mech, lists):
    hit = F(0)
    for i, members in enumerate(lists):
        hit += sum(inst.pmf[x] * mech.entry(x, i) for x in members)
    return 1 - hit


class TestMapEstimator:
    def test_uniform_mechanism_always_guesses_global_top(self):
        est = map_list_estimator(SKEW7, uniform_qr(SKEW7))
        assert est.lists == ((0, 1, 2), (0, 1, 2))

    def test_lists_have_size_l(self):
        rng = random.Random(31)
        for _ in range(20):
            inst = random_instance(rng)
            est = map_list_estimator(inst, random_mechanism(rng, inst))
            assert len(est.lists) == inst.k
            assert all(len(members) == inst.l for members in est.lists)

    def test_per_output_choice_maximizes_joint_mass(self):
        rng = random.Random(32)
        for _ in range(20):
            inst = random_instance(rng, r_max=6, l_max=3)
            mech = random_mechanism(rng, inst)
            report = list_privacy(inst, mech)
            for i in range(inst.k):
                best = max(
                    sum(inst.pmf[x] * mech.entry(x, i) for x in lst)
                    for lst in combinations(range(inst.r), inst.l)
                )
                assert report.per_output_mass[i] == best


class TestListPrivacyFrozen:
    def test_uniform_mechanism_value(self):
        assert list_privacy(SKEW7, uniform_qr(SKEW7)).privacy == F(7, 20)

    def test_ternary_mechanism_value(self):
        inst, w = ternary_example_qr(F(3, 5))
        assert list_privacy(inst, w).privacy == F(2, 5)

    def test_binary_mechanism_value_large_list(self):
        inst = UNIFORM4.with_list_size(3)
        w = optimal_binary_qr(inst, F(9, 10))
        assert list_privacy(inst, w).privacy == F(1, 20)


class TestListPrivacyProperties:
    def test_matches_brute_force_over_all_estimators(self):
        rng = random.Random(33)
        for _ in range(20):
            inst = random_instance(rng, r_max=5, k_max=3, l_max=2)
            mech = random_mechanism(rng, inst)
            report = list_privacy(inst, mech)
            choices = list(combinations(range(inst.r), inst.l))
            brute = min(
                estimator_miss_probability(inst, mech, pick)
                for pick in product(choices, repeat=inst.k)
            )
            assert report.privacy == brute

    def test_never_beats_the_converse_bound(self):
        rng = random.Random(34)
        for _ in range(30):
            inst = random_instance(rng, r_max=7, k_max=3, l_max=3)
            mech = random_mechanism(rng, inst, rho=random_rho(rng))
            level = recoverability_level(mech, inst)
            assert list_privacy(inst, mech).privacy <= privacy_bound(inst, level)

    def test_longer_lists_never_hurt(self):
        rng = random.Random(35)
        for _ in range(20):
            inst = random_instance(rng, r_max=7)
            if inst.l >= inst.r - 1:
                continue
            mech = random_mechanism(rng, inst)
            wider = inst.with_list_size(inst.l + 1)
            assert list_privacy(wider, mech).privacy <= list_privacy(inst, mech).privacy

    def test_input_relabeling_invariance(self):
        rng = random.Random(36)
        for _ in range(15):
            inst = random_instance(rng, r_max=6, k_max=3)
            mech = random_mechanism(rng, inst)
            perm = list(range(inst.r))
            rng.shuffle(perm)
            pmf = [None] * inst.r
            f = [None] * inst.r
            rows = [None] * inst.r
            for x in range(inst.r):
                pmf[perm[x]] = inst.pmf[x]
                f[perm[x]] = inst.f[x]
                rows[perm[x]] = mech.rows[x]
            other = Instance(pmf=tuple(pmf), f=tuple(f), l=inst.l)
            other_mech = StochasticMatrix(rows=tuple(rows))
            assert list_privacy(other, other_mech).privacy == list_privacy(inst, mech).privacy

    def test_output_relabeling_invariance(self):
        rng = random.Random(37)
        for _ in range(15):
            inst = random_instance(rng, r_max=6, k_max=3)
            mech = random_mechanism(rng, inst)
            sigma = list(range(inst.k))
            rng.shuffle(sigma)
            f = tuple(sigma[v] for v in inst.f)
            other = Instance(pmf=inst.pmf, f=f, l=inst.l)
            rows = tuple(
                tuple(row[sigma.index(j)] for j in range(inst.k)) for row in mech.rows
            )
            other_mech = StochasticMatrix(rows=rows)
            assert list_privacy(other, other_mech).privacy == list_privacy(inst, mech).privacy

    def test_tied_scores_do_not_change_the_value(self):
        # Uniform everything: any l-list per output is optimal, and the value
        # must be the same no matter which one the tie-break selects.
        inst = Instance(pmf=(F(1, 4),) * 4, f=(0, 1, 0, 1), l=2)
        mech = uniform_qr(inst)
        report = list_privacy(inst, mech)
        assert report.privacy == F(1, 2)
        assert report.estimator.lists == ((0, 1), (0, 1))

    def test_report_masses_sum_to_hit_probability(self):
        rng = random.Random(38)
        for _ in range(15):
            inst = random_instance(rng)
            mech = random_mechanism(rng, inst)
            report = list_privacy(inst, mech)
            assert sum(report.per_output_mass) == 1 - report.privacy
            assert 0 <= report.privacy <= 1

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            list_privacy(SKEW7, uniform_qr(UNIFORM4))


class TestReportExport:
    def test_jsonable_payload(self):
        report = list_privacy(SKEW7, uniform_qr(SKEW7))
        payload = report_to_jsonable(report, SKEW7)
        assert payload["privacy"] == "7/20"
        assert payload["privacy_decimal"] == 0.35
        assert len(payload["per_output_mass"]) == 2
        assert "7/20" in report_to_text(report, SKEW7)
