import io
import json

import pytest

from octalab import cli


def run(argv):
    cfg = cli.parse_args(argv)
    buf = io.StringIO()
    code = cli.run(cfg, buf)
    return code, buf.getvalue()


def test_group_json_is_byte_stable(tmp_path):
    a = run(["group", "--format", "json", "--cache-dir", str(tmp_path)])
    b = run(["group", "--format", "json", "--cache-dir", str(tmp_path)])
    assert a == b and a[0] == 0
    doc = json.loads(a[1])
    assert doc["passed"] and doc["reports"][0]["data"]["orders"] == {"L34": 20160, "G": 80640}


def test_cache_matches_scratch_and_survives_corruption(tmp_path, caplog):
    fresh = run(["group", "--format", "json"])
    run(["group", "--format", "json", "--cache-dir", str(tmp_path)])
    for f in tmp_path.glob("G-*.npz"):
        f.write_bytes(b"not a zip file")
    again = run(["group", "--format", "json", "--cache-dir", str(tmp_path)])
    assert again == fresh
    assert any("rebuilding" in rec.message for rec in caplog.records)


def test_suborbits_dot():
    code, out = run(["suborbits", "--format", "dot"])
    assert code == 0 and out.startswith("graph suborbits {")
    for name, size in zip(["O0", "O1a", "O1b", "O2a", "O2b", "O3a", "O3b", "O4"],
                          [1, 2, 8, 16, 32, 64, 64, 128]):
        assert f'"{name}" [label="{name}\\n{size}"]' in out


def test_family_product():
    code, out = run(["family", "--instance", "product", "--format", "json"])
    doc = json.loads(out)
    assert code == 0
    assert doc["reports"][0]["data"]["parameters"] == {"s": 2, "t": 2, "t'": 1}


def test_dot_only_for_suborbits():
    with pytest.raises(ValueError):
        run(["octagon", "--format", "dot"])
    assert cli.main(["octagon", "--format", "dot"]) == 2


def test_bad_arguments():
    with pytest.raises(SystemExit):
        cli.parse_args(["nonsense"])
    with pytest.raises(SystemExit):
        cli.parse_args(["group", "--budget", "0"])


def test_text_summary():
    code, out = run(["quads"])
    assert code == 0
    assert out.rstrip().endswith("checks passed")
    assert "FAIL" not in out
