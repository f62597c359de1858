import json

import pytest

from mrrt.cli import builtin_scenarios, resolve_scenario
from mrrt.scenario import dumps_scenario, loads_scenario, scenario_from_dict, scenario_to_dict
from mrrt.simworld import ConfigurationError, run_episode
from mrrt.trace import TraceError, read_trace, write_trace


@pytest.mark.parametrize("name", ["crossing", "single_crossing", "empty"])
def test_bundled_scenarios_round_trip(name):
    sc = resolve_scenario(name)
    again = loads_scenario(dumps_scenario(sc))
    assert again == sc
    assert scenario_to_dict(again) == scenario_to_dict(sc)


def test_builtin_listing():
    assert {"crossing", "single_crossing", "empty"} <= set(builtin_scenarios())


def minimal():
    return {
        "workspace": {"min_x": 0, "min_y": 0, "max_x": 10, "max_y": 10},
        "start": [1, 1], "goal": [9, 9],
        "robot": {"speed": 1.0, "radius": 0.1},
        "sensor": {"range": 2.0},
        "obstacles": [{"center": [5, 5], "radius": 1, "known": False,
                       "motion": {"kind": "linear", "velocity": [0.5, 0]}}],
    }


def test_minimal_scenario_defaults():
    sc = scenario_from_dict(minimal())
    assert sc.planner.inflation == pytest.approx(0.1)
    assert sc.planner.eta == pytest.approx(sc.workspace.diagonal / 20)
    assert sc.dt == 0.1
    assert sc.obstacles[0].motion.velocity == (0.5, 0.0)


def test_missing_goal_is_named():
    data = minimal()
    del data["goal"]
    with pytest.raises(ConfigurationError, match="goal"):
        scenario_from_dict(data)


def test_bad_field_message_points_at_obstacle():
    data = minimal()
    data["obstacles"][0]["motion"] = {"kind": "linear"}
    with pytest.raises(ConfigurationError, match=r"obstacles\[0\]"):
        scenario_from_dict(data)


def test_malformed_json_reports_position():
    with pytest.raises(ConfigurationError, match="line"):
        loads_scenario('{"start": [1, 1],\n  oops}')


def test_trace_round_trip_and_replay(tmp_path):
    sc = resolve_scenario("empty")
    res = run_episode(sc, "mrrt", 0, record_forest=True)
    path = tmp_path / "t.jsonl"
    write_trace(path, res.trace)
    events = read_trace(path)
    assert len(events) == res.steps
    assert events[-1]["kind"] == "goal"
    # replaying the recorded moves lands on the same positions
    pos = list(sc.start)
    for ev in events:
        assert ev["robot"] == pytest.approx(pos, abs=0)
        pos = ev["robot_after"]
    assert all(ev["stats"]["elapsed"] is None for ev in events)
    assert {"nodes", "edges"} <= set(events[0]["forest"])


def test_trace_errors_name_the_line(tmp_path):
    good = json.dumps({"step": 0, "time": 0.0, "robot": [0, 0], "kind": "replan"})
    p = tmp_path / "bad.jsonl"
    p.write_text(good + "\n{not json\n")
    with pytest.raises(TraceError, match="line 2"):
        read_trace(p)
    p.write_text(good + "\n" + good + "\n")
    with pytest.raises(TraceError, match="line 2"):
        read_trace(p)
    p.write_text(json.dumps({"step": 0, "time": 0.0, "robot": [0, 0], "kind": "dance"}) + "\n")
    with pytest.raises(TraceError, match="line 1"):
        read_trace(p)
