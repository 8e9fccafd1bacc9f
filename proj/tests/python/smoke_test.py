"""End-to-end smoke tests for the python module."""

import os
import subprocess
import sys
import tempfile

import mtt


def test_numeric_primitives():
    assert mtt.median_filter([4, 4, 12, 4, 4], 3) == [4, 4, 4, 4, 4]

    subs = mtt.partition_adaptive([10, 10, 10, 20, 20, 20], {"w_median": 1})
    assert subs == [(1, 3), (4, 6)]

    labels = mtt.dbscan([[0, 5, 500], [5, 0, 500], [500, 500, 0]], 80.0, 2)
    assert labels[0] == labels[1] != labels[2]

    picked = mtt.mwis([3.0, 2.0, 2.0], [(0, 1), (0, 2)])
    assert picked == [1, 2]

    assert abs(mtt.score_appearance(0.0, 0.3) - 0.5108) < 1e-3
    assert abs(mtt.score_confidence(1.0, 0.1) - 0.7163) < 1e-3


def test_pipeline_roundtrip():
    with tempfile.TemporaryDirectory() as work:
        scene = os.path.join(work, "scene")
        info = mtt.simulate(scene, {"seed": 3, "n_targets": 4, "n_frames": 30,
                                    "miss_rate": 0.05, "fp_rate": 0.05})
        assert info["detections"] > 0

        out = os.path.join(work, "tracks.csv")
        counts = mtt.track(os.path.join(scene, "dets.csv"), out,
                           emb=os.path.join(scene, "embeddings.csv"))
        assert counts["final_tracks"] > 0
        assert counts["tracklets"] > 0

        report = mtt.evaluate(os.path.join(scene, "gt.csv"), out)
        assert report["MOTA"] > 0.5
        assert report["GT_count"] == 4 * 30

        perfect = mtt.evaluate(os.path.join(scene, "gt.csv"),
                               os.path.join(scene, "gt.csv"))
        assert perfect["MOTA"] == 1.0
        assert perfect["IDF1"] == 1.0


def test_cli_available():
    cli = os.environ.get("MTT_CLI")
    if not cli:
        return
    proc = subprocess.run([cli, "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    for sub in ("track", "simulate", "evaluate", "partition-debug"):
        assert sub in proc.stdout


def main():
    failures = 0
    for test in (test_numeric_primitives, test_pipeline_roundtrip, test_cli_available):
        try:
            test()
            print(f"ok {test.__name__}")
        except AssertionError as exc:
            failures += 1
            print(f"FAIL {test.__name__}: {exc}")
    return failures


if __name__ == "__main__":
    sys.exit(main())
