import random
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ecsigncrypt import costmodel as cm
from ecsigncrypt.costmodel import CostParams, OpVector
from ecsigncrypt.curve import P192
from ecsigncrypt.errors import UsageError

GOLDEN = Path(__file__).parent / "data" / "cost_model_default.csv"

# Hand transcription of the printed operation-count table, "-" meaning zero.
PRINTED_TABLE = """
Zheng              Alice 1 1 - - - 1 2
Zheng              Bob   2 - - - 2 - 2
Jung               Alice 2 1 - - - 1 2
Jung               Bob   3 - - - 1 - 2
Bao                Alice 2 1 - - - 1 3
Bao                Bob   3 - - - 1 - 3
Gamage             Alice 2 1 - - - 1 2
Gamage             Bob   3 - - - 1 - 2
Zheng-and-Imai     Alice - 1 1 - 1 1 2
Zheng-and-Imai     Bob   - - 2 1 2 - 2
Han                Alice - 1 2 - 2 1 2
Han                Bob   - 1 3 1 2 - 2
Hwang              Alice - - 2 - 1 1 1
Hwang              Bob   - - 3 1 - - 1
Proposed           Alice - - 2 - 2 2 2
Proposed           Bob   - - 4 2 - - 2
"""

PRINTED_ATTRIBUTES = """
zheng      no  yes yes via-another-protocol yes no
jung       no  yes yes via-another-protocol yes yes
zheng-imai no  yes yes via-another-protocol yes no
bao-deng   no  yes yes direct               yes no
gamage     yes yes yes direct               yes no
han        no  no  no  direct               no  no
hwang      no  no  no  direct               no  no
proposed   yes yes yes direct               yes yes
"""


def printed_rows():
    for line in PRINTED_TABLE.strip().splitlines():
        scheme, who, *cells = line.split()
        yield scheme, who, [0 if c == "-" else int(c) for c in cells]


def test_table2_row_for_row():
    rows = list(printed_rows())
    assert len(rows) == 16 == len(cm.TABLE2)
    for scheme, who, cells in rows:
        ops = cm.table2_counts(scheme, who)
        assert [ops.exp, ops.div, ops.ecpm, ops.ecpa, ops.mul, ops.add, ops.hash] == cells, (scheme, who)


def test_table2_examples():
    assert cm.table2_counts("proposed", "Alice") == OpVector(ecpm=2, mul=2, add=2, hash=2)
    assert cm.table2_counts("Zheng", "Bob") == OpVector(exp=2, mul=2, hash=2)
    with pytest.raises(KeyError):
        cm.table2_counts("nonexistent", "alice")
    with pytest.raises(KeyError):
        cm.table2_counts("zheng", "carol")


def test_unit_costs():
    assert cm.unit_costs(CostParams(192))["mul"] == 36864
    assert cm.unit_costs(CostParams(1024))["exp"] == 1073741824
    assert cm.unit_costs(CostParams(192))["add"] == 192
    assert CostParams.with_hash(192, "md5").hash_cost == 744
    with pytest.raises(UsageError):
        CostParams(0)
    with pytest.raises(UsageError):
        CostParams.with_hash(192, "sha3")


def test_point_operation_costs():
    assert cm.ecpm_cost(CostParams(192)) == 78_446_592
    assert cm.ecpa_cost(CostParams(192)) == 591_168
    assert cm.ecpm_cost(CostParams(1)) == 1937


def hand_total(cells, z, hash_cost=1110):
    exp, div, ecpm, ecpa, mul, add, h = cells
    return (exp * z**3 + div * z**2 + ecpm * (1936 * z**2 + z**3) + ecpa * (16 * z**2 + 7 * z)
            + mul * z**2 + add * z + h * hash_cost)


EXP_SCHEMES = {"Zheng", "Jung", "Bao", "Gamage"}


def test_totals_match_hand_formula():
    for scheme, who, cells in printed_rows():
        z = 1024 if scheme in EXP_SCHEMES else 192
        assert cm.total_cost(scheme, who) == hand_total(cells, z)
        z2 = 512 if scheme in EXP_SCHEMES else 160
        got = cm.total_cost(scheme, who, CostParams.with_hash(512, "md5"), CostParams.with_hash(160, "md5"))
        assert got == hand_total(cells, z2, 744)


def test_total_examples():
    assert cm.total_cost("proposed", "sender") == 156_969_516
    assert cm.total_cost("proposed", "receiver") == 314_970_924
    assert cm.total_cost("zheng", "sender") == 1_074_793_644


@given(st.integers(1, 4096), st.integers(0, 10**6), st.sampled_from([k for k, _, _ in cm.SCHEMES]),
       st.sampled_from(["sender", "receiver"]))
def test_cost_is_linear_in_operation_counts(z, hash_cost, scheme, role):
    cp = CostParams(z, hash_cost)
    ops = cm.table2_counts(scheme, role)
    parts = [OpVector(**{f: getattr(ops, f) if f == g else 0 for f in ops.__dataclass_fields__})
             for g in ops.__dataclass_fields__]
    assert sum(cm.vector_cost(p, cp) for p in parts) == cm.vector_cost(ops, cp)
    assert cm.vector_cost(ops + ops, cp) == 2 * cm.vector_cost(ops, cp)


def test_proposed_cheaper_than_exponentiation_schemes():
    for role in ("sender", "receiver"):
        ours = cm.total_cost("proposed", role)
        for other in ("zheng", "jung", "bao-deng", "gamage"):
            assert ours < cm.total_cost(other, role), (other, role)


def test_golden_csv():
    assert cm.emit_comparison() == GOLDEN.read_text()


def test_golden_csv_totals_are_hand_totals():
    lines = GOLDEN.read_text().split("\n\n")[0].splitlines()
    assert lines[0] == "scheme,participant,exp,div,ecpm,ecpa,mul,add,hash,total_bitops"
    for line, (scheme, who, cells) in zip(lines[1:], printed_rows()):
        fields = line.split(",")
        assert [int(v) for v in fields[2:9]] == cells
        z = 1024 if scheme in EXP_SCHEMES else 192
        assert int(fields[9]) == hand_total(cells, z)


def test_attribute_matrix():
    section = cm.emit_comparison().split("\n\n")[1].splitlines()
    assert section[0] == ",".join(cm.ATTR_HEADER)
    expected = [line.split() for line in PRINTED_ATTRIBUTES.strip().splitlines()]
    assert [row.split(",") for row in section[1:]] == expected


def test_chart_format():
    chart = cm.emit_comparison(format="chart", width=40)
    lines = chart.splitlines()
    assert "zeta_exp=1024" in lines[0]
    bars = {(l.split()[0], l.split()[1]): l.split()[2] for l in lines[1:17]}
    peak = max(bars.values(), key=len)
    assert len(peak) == 40 and peak == bars[("bao-deng", "receiver")]
    assert len(bars[("proposed", "sender")]) < len(bars[("zheng", "sender")])
    assert cm.emit_comparison(format="text-bar-chart") == cm.emit_comparison(format="chart")


def test_unsupported_format():
    with pytest.raises(UsageError):
        cm.emit_comparison(format="xml")


def test_measured_point_addition():
    c = cm.measure_field_ops(P192, "ecpa", rng=random.Random(1))
    assert (c.mul_count, c.add_count, c.inv_count) == (16, 7, 0)
    c = cm.measure_field_ops(P192, "ecpa-mixed", rng=random.Random(1))
    assert c.mul_count == 11 and c.inv_count == 0
    c = cm.measure_field_ops(P192, "ecpa-affine", rng=random.Random(1))
    assert c.inv_count == 1


def test_measured_point_multiplication():
    c = cm.measure_field_ops(P192, "ecpm-wnaf", rng=random.Random(2))
    assert 0.7 * 1936 <= c.mul_count <= 1.3 * 1936
    assert c.inv_count <= 2
    with pytest.raises(UsageError):
        cm.measure_field_ops(P192, "ecpd")
