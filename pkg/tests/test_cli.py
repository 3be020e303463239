import io
import subprocess
import sys

from hypothesis import given, strategies as st

from lemonlimbs.angles import Angle
from lemonlimbs.cli import format_record, parse_record, run
from lemonlimbs.numerics import fmt_complex
from lemonlimbs.render import read_ppm

CENTER = "0.50086986353490404,-0.25967795067238336"


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), stdout=buf)
    return code, buf.getvalue().splitlines()


def test_simulate_record():
    code, lines = call("simulate", "--t", "1/3")
    assert code == 0
    assert lines[0].startswith("t=1/3 k=1 x=1/4 y=5/8 ")


def test_simulate_levels():
    _, lines = call("simulate", "--t", "1/5", "--levels")
    assert lines[1:] == [
        "level=0 orbit={11/20,13/20,17/20,19/20}",
        "level=1 orbit={17/80,51/80,59/80,73/80}",
        "level=2 orbit={1/10,3/10,7/10,9/10}",
        "level=3 orbit={7/80,21/80,29/80,63/80}",
        "level=4 orbit={1/20,3/20,7/20,9/20}",
    ]


def test_realize_count():
    assert call("realize", "--sigma", "(1243)", "--k", "3", "--count") == (0, ["5"])


def test_partners():
    code, lines = call("partners", "--period", "4")
    assert lines[2] == "2/5 <-> 3/5"
    assert call("partners", "--t", "1/7")[1] == ["t=1/7 partner=2/7"]


def test_verify_output_shape():
    code, lines = call("verify", "interlace", "--max-period", "5")
    assert code == 0
    assert lines[0].startswith("OK ") and lines[0].endswith(" pairs checked")


def test_trace_ray_lines():
    code, lines = call("trace-ray", "--a", CENTER, "--b", "0,0", "--angle", "1/4", "--s-end", "1e-3")
    assert code == 0
    s, re_, im = lines[0].split(" ")
    assert float(s) == 8.0
    assert float(s) > float(lines[-1].split(" ")[0])


def test_negative_complex_values_are_accepted():
    code, lines = call("lemon", "kappa", "--a", "-0.1,-0.2")
    assert code == 0
    re_, im = map(float, lines[0].split())
    assert abs(complex(re_, im)) < 1


def test_lemon_pairs():
    assert call("lemon", "center", "--t", "1/3") == (0, ["0.50086986353490404 -0.25967795067238336"])


def test_domain_error_exit_code():
    assert call("lemon", "kappa", "--a", "2,2")[0] == 1
    assert call("partners", "--t", "0")[0] == 1


def test_usage_error_exit_codes():
    assert call("simulate", "--t", "1/x")[0] == 2
    assert call("simulate", "--t", "1/3", "--bogus")[0] == 2
    assert call("nope")[0] == 2
    assert call()[0] == 2


def test_render_writes_ppm(tmp_path):
    out = tmp_path / "lemon.ppm"
    code, lines = call("render", "lemon", "--res", "30x20", "--out", str(out), "--threads", "2")
    assert code == 0
    img = read_ppm(out)
    assert (img.width, img.height) == (30, 20)


def test_every_output_passes_parse_check(tmp_path):
    commands = [
        ("orbits", "--k", "3", "--q", "2"),
        ("simulate", "--t", "2/5", "--levels"),
        ("realize", "--sigma", "(1243)", "--k", "3"),
        ("partners", "--period", "5"),
        ("portrait", "--orbit", "1/5", "--limb", "3/15,4/15"),
        ("reduce", "--sigma", "(1243)"),
        ("reduce", "--sigma", "(12354)"),
        ("third-cycle", "--t", "2/5", "--limb", "3/15,4/15"),
        ("trace-ray", "--a", CENTER, "--angle", "5/8", "--s-end", "1e-2"),
        ("trace-ray", "--a", CENTER, "--angle", "5/8", "--summary"),
        ("coland", "--a", CENTER, "--angle1", "1/4", "--angle2", "5/8"),
        ("lemon", "kappa", "--a", "0.1,0.2"),
        ("lemon", "boundary", "--t", "1/3"),
        ("lemon", "ray", "--xi", "11/12"),
        ("lemon", "limb", "--a", CENTER, "--t", "1/3"),
        ("verify", "all", "--max-period", "3"),
        ("verify", "lren", "--a", CENTER, "--b", "0.3,0", "--t", "1/3"),
        ("examples", "lemon-center", "--t", "1/7"),
        ("render", "julia", "--a", CENTER, "--res", "16x16", "--out", str(tmp_path / "j.ppm"), "--rays", "1/4"),
    ]
    collected = []
    for argv in commands:
        code, lines = call(*argv)
        assert code == 0, argv
        collected.extend(lines)
    record_file = tmp_path / "records.txt"
    record_file.write_text("\n".join(collected) + "\n")
    code, lines = call("--parse-check", str(record_file))
    assert code == 0, lines
    assert lines[-1] == f"parse-check lines={len(collected)} bad=0"


def test_parse_check_flags_garbage(tmp_path):
    f = tmp_path / "bad.txt"
    f.write_text("t=1/3 ok=yes\nkey=a b\n=x\nfine  double-space\n")
    code, lines = call("--parse-check", str(f))
    assert code == 1
    assert lines[-1] == "parse-check lines=4 bad=2"


values = st.one_of(
    st.integers(-10**6, 10**6).map(str),
    st.builds(lambda p, q: str(Angle(p, q)), st.integers(0, 99), st.integers(1, 99)),
    st.complex_numbers(max_magnitude=1e9, allow_nan=False, allow_infinity=False).map(fmt_complex),
    st.floats(allow_nan=False, allow_infinity=False).map(lambda x: f"{x:.17g}"),
)
keys = st.from_regex(r"[a-z][a-z0-9_]{0,6}", fullmatch=True)


@given(st.lists(st.tuples(st.one_of(st.none(), keys), values), min_size=1, max_size=6))
def test_record_round_trip(fields):
    line = format_record(fields)
    assert parse_record(line) == fields


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "lemonlimbs", "realize", "--sigma", "(1243)", "--k", "3", "--count"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.strip() == "5"
