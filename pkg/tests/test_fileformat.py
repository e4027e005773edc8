import pytest

from ocnsim.fileformat import ParseError, parse_net, serialize_net
from ocnsim.nets import OMEGA

PUMP = """\
net: pump
type: ocn
alphabet: a tau
# drain with a, refill silently
p a -1 p
p tau +1 p
"""


def test_parse_pump_net():
    net = parse_net(PUMP)
    assert net.name == "pump"
    assert net.states == ("p",)
    assert len(net.transitions) == 2


def test_roundtrip_identity(commit_drain):
    text = serialize_net(commit_drain)
    again = parse_net(text)
    assert again == parse_net(serialize_net(again))


def test_delta_out_of_range():
    with pytest.raises(ParseError) as err:
        parse_net(PUMP + "p a +2 p\n")
    assert "delta" in str(err.value)
    assert err.value.line == 7


def test_omega_needs_omega_type():
    with pytest.raises(ParseError):
        parse_net("net: x\ntype: ocn\nalphabet: a\np a w q\n")
    net = parse_net("net: x\ntype: omega\nalphabet: a\np a w q\n")
    assert net.transitions[0].effect is OMEGA


def test_unknown_action_is_located():
    with pytest.raises(ParseError) as err:
        parse_net("net: x\ntype: ocn\nalphabet: a\np b 0 q\n")
    assert err.value.line == 4


def test_reserved_prefix_rejected():
    with pytest.raises(ParseError):
        parse_net("net: x\ntype: ocn\nalphabet: $a\np $a 0 q\n")
    with pytest.raises(ParseError):
        parse_net("net: x\ntype: ocn\nalphabet: a\n$p a 0 q\n")


def test_missing_headers_reported():
    with pytest.raises(ParseError):
        parse_net("type: ocn\nalphabet: a\np a 0 q\n")
    with pytest.raises(ParseError):
        parse_net("net: x\nalphabet: a\np a 0 q\n")
    with pytest.raises(ParseError):
        parse_net("net: x\ntype: ocn\np a 0 q\n")


def test_malformed_line_is_an_error_not_a_crash():
    with pytest.raises(ParseError) as err:
        parse_net("net: x\ntype: ocn\nalphabet: a\np a 0\n")
    assert err.value.line == 4
