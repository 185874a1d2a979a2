import json
import os
import pathlib

import pytest

import lbscrypt

SCENE_DIR = pathlib.Path(os.environ.get("LBSCRYPT_SCENE_DIR", pathlib.Path(__file__).parents[2] / "scenes"))


def demo_scene():
    return json.loads((SCENE_DIR / "demo_basic.json").read_text())


def triangle_scene(mode):
    return {
        "user_location": [3, 4],
        "history": [[3, 4]],
        "pois": [[0, 0], [10, 0], [0, 10]],
        "t": 2,
        "world_diameter": 15,
        "k_nn": 1,
        "seed": 5,
        "mode": mode,
        "mask_range": 1000,
    }


def test_worked_examples():
    assert lbscrypt.worked_examples()


def test_oracle_matches_brute_force():
    tr = lbscrypt.simulate_dict(demo_scene())
    assert tr["response"]["indices"] == tr["sidecar"]["brute_force_order"][:2]


def test_simulate_is_deterministic():
    text = json.dumps(demo_scene())
    assert lbscrypt.simulate(text, "faithful") == lbscrypt.simulate(text, "faithful")


def test_masked_pipeline_recovers_location():
    tr = lbscrypt.simulate_dict(triangle_scene("masked"))
    report = lbscrypt.pipeline_dict(tr)
    assert report["source"] == "masked"
    assert report["match"]["sidecar_among_candidates"]
    assert ["3", "4"] in [c["user_location"] for c in report["candidates"]]


def test_locate_rejects_masked_transcript():
    text = lbscrypt.simulate(json.dumps(triangle_scene("masked")))
    with pytest.raises(lbscrypt.AttackError):
        lbscrypt.attack_pipeline(text, require_z_leak=True)


def test_unknown_field_is_a_value_error():
    scene = demo_scene()
    scene["colour"] = "blue"
    with pytest.raises(ValueError, match="colour"):
        lbscrypt.simulate(json.dumps(scene))


def test_unmask_big_integers():
    assert len(lbscrypt.unmask(210, 100)) == 14
    big = 2**80 * 3
    cands = lbscrypt.unmask(big, 2**100)
    assert big in cands and all(big % c == 0 for c in cands)


def test_msb_collision():
    c = lbscrypt.msb_collision(3, 5)
    assert c["z1"] - c["z0"] == 8
    assert c["w1"] != c["w0"]
    assert c["w0"] % 8 == c["w1"] % 8 == c["wbar"]


def test_flaw_rate_below_control():
    report = json.loads(lbscrypt.attack_flaw(l=3, k_sec=2, trials=2000, seed=3))
    assert report["agreement_rate"] < 0.95
    assert report["control_agreement_rate"] == 1.0
