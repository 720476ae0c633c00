import json
import subprocess


def run(vps_bin, *args, env=None):
    return subprocess.run([vps_bin, *args], capture_output=True, text=True, env=env, timeout=60)


def test_parse(vps_bin, sample_path):
    r = run(vps_bin, "parse", sample_path("person.mjv"))
    assert r.returncode == 0
    assert len(json.loads(r.stdout)["classes"]) == 2
    assert run(vps_bin, "parse", sample_path("nope.mjv")).returncode == 3


def test_trace_and_render(vps_bin, sample_path):
    r = run(vps_bin, "trace", sample_path("example1_int_array.mjv"))
    assert r.returncode == 0
    assert len(json.loads(r.stdout)["events"]) == 3
    r = run(vps_bin, "render", sample_path("example1_int_array.mjv"), "--step", "9")
    assert r.returncode == 2
    assert "0..2" in r.stderr


def test_grade_exit_codes(vps_bin, sample_path):
    prog = sample_path("friends.mjv")
    good = run(vps_bin, "grade", prog, "--step", "last", "--answer", sample_path("answers/friends_final.vpsd"))
    assert good.returncode == 0
    extra = run(vps_bin, "grade", prog, "--step", "last", "--answer", sample_path("answers/friends_extra_node.vpsd"))
    assert extra.returncode == 1
    assert [d["kind"] for d in json.loads(extra.stdout)["discrepancies"]] == ["ExtraNode"]


def test_usage_error(vps_bin):
    assert run(vps_bin, "bogus").returncode == 2
