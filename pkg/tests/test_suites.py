import io

from lemonlimbs.cli import run
from lemonlimbs.suites import SUITES, partner_tables, yoccoz


def test_verify_all_period_six():
    buf = io.StringIO()
    assert run(["verify", "all", "--max-period", "6"], stdout=buf) == 0
    ok_lines = [line for line in buf.getvalue().splitlines() if " OK " in line]
    assert len(ok_lines) == len(SUITES)


def test_partner_table_suite_counts_pairs():
    res = partner_tables(5)
    # one pair of period 2, three of period 3, six of period 4, fifteen of period 5
    assert res.ok and res.checked == 25
    assert str(res).startswith("OK ")


def test_yoccoz_suite_checks_centres():
    res = yoccoz(2)
    assert res.ok and res.checked > 0
