import re

import pytest

from hyperfix.harness import cli
from hyperfix.harness import config as hc
from hyperfix.harness import scenarios as sc
from hyperfix.harness import suites as su

S1_TEXT = sc.scenario_path("S1").read_text()


def s1_with(old, new):
    assert old in S1_TEXT
    return S1_TEXT.replace(old, new)


class TestConfig:
    def test_load_s1(self):
        cfg = sc.load_scenario("S1")
        assert cfg.name == "S1" and cfg.space.kind == "box" and cfg.space.dim == 2
        assert cfg.group.kind == "cyclic" and cfg.group.order == 4
        assert cfg.iteration.mode == "theorem1" and cfg.iteration.x1 == [1.5, 0.75]
        act = hc.build_action(cfg)
        assert act.group.n == 4 and len(act.maps) == 4

    @pytest.mark.parametrize("angle,value", [("pi", 3.141592653589793), ("2pi/3", 2.0943951023931953),
                                             ("pi/2", 1.5707963267948966), ("0.25", 0.25)])
    def test_parse_angle(self, angle, value):
        assert hc.parse_angle(angle) == pytest.approx(value, abs=1e-15)

    def test_map_count_mismatch_names_maps(self):
        text = s1_with('generator = {"kind": "rotation2d", "quarter_turns": 1, "center": [0.5, -0.25]}',
                       'm0 = {"kind": "identity"}\nm1 = {"kind": "identity"}\nm2 = {"kind": "identity"}')
        with pytest.raises(hc.ConfigError) as e:
            hc.parse_config(text, "bad.ini")
        assert e.value.field.startswith("maps")
        assert "group order is 4 but 3 maps" in str(e.value)
        assert str(e.value).startswith("bad.ini:")

    def test_zero_tolerance(self):
        with pytest.raises(hc.ConfigError) as e:
            hc.parse_config(s1_with("tol = 1e-10", "tol = 0"), "bad.ini")
        assert e.value.field == "iteration.tol"
        assert re.match(r"bad\.ini:\d+: \[iteration\.tol\] must be a positive number", str(e.value))

    def test_duplicate_key(self):
        with pytest.raises(hc.ConfigError, match=r"\[space\.dim\] duplicate key"):
            hc.parse_config(s1_with("dim = 2", "dim = 2\ndim = 3"))

    def test_unknown_mode(self):
        with pytest.raises(hc.ConfigError, match="iteration.mode"):
            hc.parse_config(s1_with("mode = theorem1", "mode = newton"))

    def test_bad_json(self):
        with pytest.raises(hc.ConfigError, match="maps"):
            hc.parse_config(s1_with('"center": [0.5, -0.25]}', '"center": [0.5, -0.25]'))

    def test_x1_dimension(self):
        with pytest.raises(hc.ConfigError, match="x1"):
            hc.parse_config(s1_with("x1 = 1.5 0.75", "x1 = 1.5"))

    @pytest.mark.parametrize("key", list(sc.SCENARIOS))
    def test_echo_round_trip(self, key):
        cfg = sc.load_scenario(key)
        echo = hc.echo_config(cfg)
        again = hc.parse_config(echo, "echo.ini")
        assert hc.echo_config(again) == echo


class TestScenarios:
    @pytest.mark.parametrize("key", list(sc.SCENARIOS))
    def test_runs_pass_and_are_reproducible(self, key, tmp_path):
        cfg = sc.load_scenario(key)
        a = sc.run_scenario(cfg, out_dir=tmp_path / "a")
        b = sc.run_scenario(cfg, out_dir=tmp_path / "b")
        assert a.ok and a.exit_code == 0, a.summary_text()
        assert set(a.files) == {a.csv_name, "summary.txt", "config.ini"}
        for name in a.files:
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
        assert a.summary_text().rstrip().endswith("result = pass")

    def test_s3_converges_to_fixed_point(self):
        res = sc.run_scenario(sc.load_scenario("S3"), write=False)
        assert abs(res.trace.final_point[0] - 0.4) <= 1e-8

    def test_s4_note_and_fixed_set(self):
        res = sc.run_scenario(sc.load_scenario("S4"), write=False)
        assert len(res.fixed_points) == 16
        assert any("f_a(0)" in n for n in res.notes)

    def test_s5_notes(self):
        res = sc.run_scenario(sc.load_scenario("S5"), write=False)
        assert res.word_ball.diameters[16] >= 8
        assert any("translation" in n for n in res.notes)

    @pytest.mark.parametrize("key", ["S6a", "S6b"])
    def test_circle_negatives(self, key):
        res = sc.run_scenario(sc.load_scenario(key), write=False)
        assert res.outcome == "hypothesis_violated" and res.ok

    def test_failing_expectation_gives_exit_1(self, tmp_path):
        cfg = hc.parse_config(s1_with("expect = converged", "expect = max_iter"))
        res = sc.run_scenario(cfg, out_dir=tmp_path)
        assert not res.ok and res.exit_code == 1
        assert "check.outcome = FAIL" in res.summary_text()

    def test_unknown_scenario(self):
        with pytest.raises(KeyError, match="S9"):
            sc.scenario_path("S9")


class TestSuites:
    def test_report_line(self):
        r = su.SuiteResult("demo", seed=3)
        assert r.check(1.0, 1.0, {}) and not r.check(2.0, 1.0, {"x": 1})
        assert r.report_line() == "demo,2,1,1,3"
        assert not r.passed

    def test_expected_violations_invert_pass(self):
        r = su.SuiteResult("neg", expect_violations=True)
        r.check(0.0, 1.0, {})
        assert not r.passed
        r.check(2.0, 1.0, {})
        assert r.passed

    def test_small_verify(self):
        results = su.verify_all(seed=1, samples=200, suites=[su.suite_box_metric, su.suite_lemmas_box,
                                                             su.suite_circle, su.suite_groups, su.suite_actions])
        assert results and all(r.passed for r in results)
        names = {r.name for r in results}
        assert {"circle_lemma_center", "group_corrupted_table", "action_mismatched_maps"} <= names
        neg = [r for r in results if r.expect_violations]
        assert neg and all(r.violations for r in neg)

    def test_samples_must_be_positive(self):
        with pytest.raises(ValueError):
            su.verify_all(samples=0)


class TestCli:
    def test_list(self, capsys):
        assert cli.main(["list-scenarios"]) == 0
        out = capsys.readouterr().out.splitlines()
        assert [line.split("\t")[0] for line in out] == list(sc.SCENARIOS)

    def test_run(self, tmp_path, capsys):
        assert cli.main(["run", "--config", str(sc.scenario_path("S1")), "--out", str(tmp_path)]) == 0
        assert "result = pass" in capsys.readouterr().out
        assert (tmp_path / "trace.csv").read_text().startswith("step,delta,r,step_dist,ratio,residual\n")

    def test_run_config_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.ini"
        bad.write_text(s1_with("tol = 1e-10", "tol = 0"))
        assert cli.main(["run", "--config", str(bad), "--out", str(tmp_path)]) == 2
        assert "iteration.tol" in capsys.readouterr().err

    def test_verify_small(self, monkeypatch, capsys):
        monkeypatch.setattr(su, "SUITES", [su.suite_box_metric, su.suite_groups])
        assert cli.main(["verify", "--samples", "50", "--seed", "2"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "name,cases,violations,max_slack,seed"
        assert all(line.endswith(",2") for line in lines[1:])

    def test_bad_samples(self):
        assert cli.main(["verify", "--samples", "0"]) == 2
