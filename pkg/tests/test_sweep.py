import math

import numpy as np
import pytest

import oracle
from test_channel import conv, irs
from uavirs.channel import conventional_path_loss, evaluate_irs
from uavirs.core import Point3
from uavirs.errors import ConfigurationError, NumericDomainError
from uavirs.sweep import SweepAxis, compare, run_sweep

SIX_DB = 20 * math.log10(2)


class TestSweepAxis:
    def test_inclusive_stop(self):
        assert SweepAxis("ue_position_x", 0, 100, 50).values() == [0.0, 50.0, 100.0]

    def test_non_multiple_stop(self):
        assert SweepAxis("ue_position_x", 0, 10, 4).values() == [0.0, 4.0, 8.0]

    def test_no_float_drift(self):
        vals = SweepAxis("theta_t", 0, 0.3, 0.1).values()
        assert vals == [0.0, 0.1, 0.2, 0.3]
        vals = SweepAxis("ue_position_x", 0, 100, 0.01).values()
        assert len(vals) == 10001 and vals[-1] == 100.0
        assert vals[1234] == 1234 * 0.01

    def test_integer_axis(self):
        assert SweepAxis("elements_joint", 10, 200, 10).values() == list(range(10, 201, 10))
        with pytest.raises(ConfigurationError):
            SweepAxis("elements_m", 1, 10, 0.5)

    @pytest.mark.parametrize(
        "args",
        [("bogus", 0, 1, 1), ("theta_t", 5, 1, 1), ("theta_t", 0, 10, 0), ("theta_t", -5, 10, 1),
         ("ue_position_x", 0, math.inf, 1), ("elements_n", 0, 10, 1)],
    )
    def test_invalid(self, args):
        with pytest.raises(ConfigurationError):
            SweepAxis(*args)


class TestRunSweep:
    def test_conventional_grid(self):
        table = run_sweep(conv(), [SweepAxis("ue_position_x", 0, 100, 50), SweepAxis("ue_position_y", 0, 100, 50)])
        assert len(table.rows) == 9 and not table.skipped
        assert [r.values for r in table.rows] == sorted(r.values for r in table.rows)
        assert table.axis_names == ("ue_position_x", "ue_position_y")

    def test_angle_sweep_monotone(self):
        table = run_sweep(irs(), SweepAxis("theta_joint", 0, 89, 1))
        assert len(table.rows) == 90
        pl = table.column("pl_db")
        assert all(b > a for a, b in zip(pl, pl[1:]))
        # brute force against the arbitrary-precision reference at every angle
        p = irs()
        for row in table.rows:
            t = row.values[0]
            ref = oracle.irs(p.fc, p.pt, 20, 20, 100, 100, p.dx, p.dy, 0.9, t, t,
                             tuple(p.bs_pos), tuple(p.irs_pos), tuple(p.ue_pos), -90)
            assert row.metrics.pl_db == pytest.approx(float(ref[0]), rel=1e-12)

    def test_singular_angle_skipped(self):
        table = run_sweep(irs(), SweepAxis("theta_joint", 0, 90, 45))
        assert [r.values for r in table.rows] == [(0.0,), (45.0,)]
        assert len(table.skipped) == 1
        assert table.skipped[0].values == (90.0,)
        assert table.skipped[0].reason.startswith("singular-angle")

    def test_degenerate_point_skipped(self):
        base = conv(uav_pos=Point3(50, 0, 1.5), ue_pos=Point3(0, 0, 1.5))
        table = run_sweep(base, SweepAxis("ue_position_x", 0, 100, 25))
        assert len(table.rows) == 4
        assert table.skipped[0].reason.startswith("degenerate-geometry")

    def test_element_sweep(self):
        table = run_sweep(irs(), SweepAxis("elements_joint", 10, 200, 10))
        pl = table.column("pl_db")
        rates = table.column("rate")
        assert all(b < a for a, b in zip(pl, pl[1:]))
        assert all(b > a for a, b in zip(rates, rates[1:]))
        by_m = dict(zip((r.values[0] for r in table.rows), pl))
        assert by_m[20] - by_m[40] == pytest.approx(2 * SIX_DB, abs=1e-12)

    def test_two_axis_count_with_skips(self):
        table = run_sweep(irs(), [SweepAxis("theta_t", 0, 90, 30), SweepAxis("theta_r", 0, 90, 30)])
        assert len(table.rows) + len(table.skipped) == 16
        assert len(table.skipped) == 7

    def test_irs_position_sweep_depends_on_hop_product(self):
        table = run_sweep(irs(), [SweepAxis("irs_position_x", 0, 100, 10), SweepAxis("irs_position_y", 0, 100, 10)])
        p = irs()
        pairs = []
        for row in table.rows:
            x, y = row.values
            ris = np.array([x, y, 40.0])
            d1 = np.linalg.norm(ris - np.array(tuple(p.bs_pos)))
            d2 = np.linalg.norm(ris - np.array(tuple(p.ue_pos)))
            pairs.append((d1 * d2, row.metrics.pl_db))
        pairs.sort()
        assert all(b[1] >= a[1] - 1e-9 for a, b in zip(pairs, pairs[1:]))

    def test_inapplicable_axis(self):
        with pytest.raises(ConfigurationError):
            run_sweep(conv(), SweepAxis("theta_t", 0, 10, 1))
        with pytest.raises(ConfigurationError):
            run_sweep(irs(), [SweepAxis("theta_t", 0, 10, 1), SweepAxis("theta_joint", 0, 10, 1)])
        with pytest.raises(ConfigurationError):
            run_sweep(irs(), [])

    def test_deterministic(self):
        axes = [SweepAxis("ue_position_x", 0, 100, 7), SweepAxis("ue_position_y", 0, 100, 7)]
        assert run_sweep(conv(), axes) == run_sweep(conv(), axes)

    def test_parallel_matches_sequential(self):
        axes = [SweepAxis("theta_t", 0, 90, 5), SweepAxis("theta_r", 0, 90, 5)]
        assert run_sweep(irs(), axes, workers=3) == run_sweep(irs(), axes, workers=1)

    def test_distance_monotone_along_ray(self):
        base = conv(ue_pos=Point3(0, 0, 1.5))
        table = run_sweep(base, SweepAxis("ue_position_x", 0, 100, 1))
        pl, r = table.column("pl_db"), table.column("rate")
        assert all(b >= a for a, b in zip(pl, pl[1:]))
        assert all(b <= a for a, b in zip(r, r[1:]))


class TestCompare:
    def test_paper_single_point(self):
        report = compare(conv(ue_pos=Point3(100, 100, 1.5)), irs())
        # mpmath: 138.76858088573846 - 94.79412615358158, 9.375383900395687 / 0.11059001576792289
        assert report.delta_pl_db == pytest.approx(43.97445473215688, abs=1e-9)
        assert report.rate_ratio == pytest.approx(84.77604271320718, rel=1e-10)
        assert report.delta_pl_db == report.conventional.pl_db - report.irs.pl_db
        assert report.rate_ratio == pytest.approx(report.irs.rate / report.conventional.rate, rel=1e-15)

    def test_swap_inverts(self):
        c, i = conv(ue_pos=Point3(100, 100, 1.5)), irs()
        ab, ba = compare(c, i), compare(i, c)
        assert ba.delta_pl_db == -ab.delta_pl_db
        assert ba.rate_ratio == pytest.approx(1 / ab.rate_ratio, rel=1e-14)

    def test_equal_links(self):
        p = irs()
        report = compare(p, p)
        assert report.delta_pl_db == 0.0 and report.rate_ratio == 1.0

    def test_equal_loss_across_models(self):
        # push the conventional link to the IRS path loss by choosing u_NLoS
        weak = irs(pt=6.0, gt_db=0.0, gr_db=0.0)
        target = evaluate_irs(weak).pl_db
        c = conv(u_nlos_db=target - conventional_path_loss(conv(u_nlos_db=0.0)))
        report = compare(c, weak)
        assert report.delta_pl_db == pytest.approx(0.0, abs=1e-9)
        assert report.rate_ratio == pytest.approx(1.0, rel=1e-9)

    def test_noise_mismatch(self):
        with pytest.raises(ConfigurationError):
            compare(conv(noise_dbm=-80.0), irs())

    def test_zero_rate_reference(self):
        with pytest.raises(NumericDomainError):
            compare(conv(pt=0.0), irs())
