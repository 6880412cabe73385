from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from singercensus.report import (
    KIND_CONJECTURED,
    KIND_PROVEN,
    KIND_SAMPLED,
    STATUS_COUNTEREXAMPLE,
    STATUS_IMPL_ERROR,
    STATUS_MATCH,
    STATUS_UNVERIFIED,
    VerificationReport,
    decode_value,
    derive_status,
    encode_value,
    make_check,
    override_formula,
    parse_report,
    serialize,
)


def sample_report():
    return VerificationReport(
        config={"command": "fibers", "q": 2, "m": 2, "n": 2, "seed": 0},
        checks=[
            make_check("a", "Theorem 4.4", 8, 8, KIND_PROVEN),
            make_check("b", "Conjecture 2.4", 1536, 1536, KIND_CONJECTURED),
            make_check("big", "Conjecture 1", 2**64 + 3, 2**64 + 3, KIND_PROVEN),
            make_check("frac", "Lemma 6.1", Fraction(16, 15), Fraction(16, 15), KIND_PROVEN),
            make_check("flag", "Prop. 7.2", True, True, KIND_PROVEN),
            make_check("est", "Conjecture 1", 10, 12, KIND_SAMPLED, detail="sampled"),
        ],
    )


def test_status_derivation():
    assert derive_status(KIND_PROVEN, 5, 5) == STATUS_MATCH
    assert derive_status(KIND_PROVEN, 5, 6) == STATUS_IMPL_ERROR
    assert derive_status(KIND_CONJECTURED, 5, 6) == STATUS_COUNTEREXAMPLE
    assert derive_status(KIND_SAMPLED, 5, 5) == STATUS_UNVERIFIED


def test_exit_codes():
    rep = sample_report()
    assert rep.exit_code() == 4  # one sampled record
    rep.checks = rep.checks[:2]
    assert rep.exit_code() == 0
    rep.checks.append(make_check("x", "Conjecture 2.4", 1, 2, KIND_CONJECTURED))
    assert rep.exit_code() == 2
    rep.checks.append(make_check("y", "Theorem 4.4", 1, 2, KIND_PROVEN))
    assert rep.exit_code() == 3  # implementation errors dominate


def test_anchor_required():
    with pytest.raises(ValueError):
        make_check("x", "", 1, 1, KIND_PROVEN)


def test_json_roundtrip_structural_equality():
    rep = sample_report()
    text = serialize(rep, "json")
    parsed = parse_report(text)
    assert parsed.config == rep.config
    assert parsed.checks == rep.checks
    assert parsed.tool_version == rep.tool_version
    # big integers survive as exact ints through the string encoding
    assert parsed.checks[2].formula_value == 2**64 + 3
    assert isinstance(parsed.checks[3].formula_value, Fraction)


def test_json_runtime_excluded_by_default():
    rep = sample_report()
    rep.runtime_ms = 1234
    assert '"runtime_ms"' not in serialize(rep, "json")
    with_it = serialize(rep, "json", include_runtime=True)
    assert '"runtime_ms": 1234' in with_it
    assert parse_report(with_it).runtime_ms == 1234


def test_json_big_ints_are_strings():
    rep = sample_report()
    text = serialize(rep, "json")
    assert f'"{2**64 + 3}"' in text


def test_serialize_deterministic():
    rep = sample_report()
    assert serialize(rep, "json") == serialize(rep, "json")
    assert serialize(rep, "csv") == serialize(rep, "csv")
    assert serialize(rep, "md") == serialize(rep, "md")


def test_csv_shape():
    text = serialize(sample_report(), "csv")
    lines = text.strip().split("\n")
    assert lines[0] == "name,paper_anchor,formula,observed,status"
    assert len(lines) == 1 + 6
    assert lines[1] == "a,Theorem 4.4,8,8,match"


def test_md_shape():
    text = serialize(sample_report(), "md")
    lines = text.strip().split("\n")
    assert lines[0].startswith("| name ")
    assert "6 checks" in lines[-1]


def test_empty_report_serializes():
    rep = VerificationReport(config={"command": "all"})
    parsed = parse_report(serialize(rep, "json"))
    assert parsed.checks == []
    assert serialize(rep, "csv") == "name,paper_anchor,formula,observed,status\n"
    serialize(rep, "md")


def test_unknown_format_rejected():
    with pytest.raises(ValueError):
        serialize(sample_report(), "yaml")


def test_override_formula_rederives_status():
    rec = make_check("a", "Theorem 4.4", 8, 8, KIND_PROVEN)
    broken = override_formula(rec, 9)
    assert broken.status == STATUS_IMPL_ERROR
    rec = make_check("b", "Conjecture 2.4", 8, 8, KIND_CONJECTURED)
    assert override_formula(rec, 9).status == STATUS_COUNTEREXAMPLE


values = st.one_of(
    st.none(),
    st.booleans(),
    st.integers(min_value=-(2**80), max_value=2**80),
    st.fractions(),
    st.text(alphabet="abcdefg ,.^()[]=-", max_size=20).filter(
        lambda s: not (s.isdigit() or (s.startswith("-") and s[1:].isdigit()))
    ),
)


@given(values)
@settings(max_examples=300, deadline=None)
def test_value_roundtrip(v):
    decoded = decode_value(encode_value(v))
    if isinstance(v, Fraction) and v.denominator == 1:
        assert decoded == v  # integers and whole fractions compare equal
    else:
        assert decoded == v and type(decoded) is type(v)
