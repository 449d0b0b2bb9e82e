import os
import random
import re
from fractions import Fraction

import pytest

from zzmds import cli
from zzmds.files import node_filename, read_manifest

CONFIG_53 = """\
# the 4x5 array over gf(3)
family=standard
m=2
r=2
s=1
scheme=cons3
field=gf(3)
"""

CONFIG_DUP = """\
family=standard
m=2
s=2
scheme=cons4
field=gf(3)
"""


def write(path, data):
    mode = "wb" if isinstance(data, bytes) else "w"
    with open(path, mode) as fh:
        fh.write(data)


def read(path):
    with open(path, "rb") as fh:
        return fh.read()


@pytest.fixture
def workdir(tmp_path):
    cfg = tmp_path / "code.cfg"
    cfg.write_text(CONFIG_53)
    payload = tmp_path / "payload.bin"
    rng = random.Random(2024)
    payload.write_bytes(bytes(rng.randrange(256) for _ in range(1024)))
    out = tmp_path / "nodes"
    rc = cli.main(["encode", str(payload), "--config", str(cfg), "--out", str(out)])
    assert rc == 0
    return tmp_path


def node_path(workdir, i):
    return workdir / "nodes" / node_filename(i)


def snapshot(workdir, n=5):
    return {i: read(node_path(workdir, i)) for i in range(n)}


def test_encode_layout(workdir):
    names = sorted(os.listdir(workdir / "nodes"))
    assert names == ["manifest", "node_00", "node_01", "node_02", "node_03", "node_04"]
    mf = read_manifest(str(workdir / "nodes" / "manifest"))
    assert (mf.m, mf.r, mf.s) == (2, 2, 1)
    assert mf.field_token == "gf(3)"
    assert mf.scheme == "cons3"
    assert mf.vectors == "00,10,01"
    assert mf.payload_length == 1024
    # 1024 bytes -> 6 symbols each -> 6144 symbols over stripes of 12
    assert mf.stripe_count == 512


def test_rebuild_single_node(workdir, capsys):
    before = snapshot(workdir)
    os.remove(node_path(workdir, 1))
    rc = cli.main(["rebuild", str(workdir / "nodes")])
    out = capsys.readouterr().out
    assert rc == 0
    assert "ratio 1/2" in out
    assert "read node_00: 2 cells/stripe" in out
    assert read(node_path(workdir, 1)) == before[1]


def test_rebuild_parity_reports_full_read(workdir, capsys):
    before = snapshot(workdir)
    os.remove(node_path(workdir, 4))
    rc = cli.main(["rebuild", str(workdir / "nodes")])
    out = capsys.readouterr().out
    assert rc == 0
    assert "ratio 1" in out and "ratio 1/" not in out
    assert read(node_path(workdir, 4)) == before[4]


def test_rebuild_needs_exactly_one_missing(workdir, capsys):
    os.remove(node_path(workdir, 0))
    os.remove(node_path(workdir, 2))
    rc = cli.main(["rebuild", str(workdir / "nodes")])
    assert rc == 3
    assert "decode" in capsys.readouterr().err


def test_decode_two_nodes_and_extract(workdir, capsys):
    before = snapshot(workdir)
    os.remove(node_path(workdir, 0))
    os.remove(node_path(workdir, 3))
    extracted = workdir / "roundtrip.bin"
    rc = cli.main(["decode", str(workdir / "nodes"), "--out", str(extracted)])
    assert rc == 0
    assert read(node_path(workdir, 0)) == before[0]
    assert read(node_path(workdir, 3)) == before[3]
    assert extracted.read_bytes() == read(workdir / "payload.bin")


def test_decode_too_many_missing(workdir, capsys):
    for i in (0, 1, 2):
        os.remove(node_path(workdir, i))
    rc = cli.main(["decode", str(workdir / "nodes")])
    assert rc == 2


def test_decode_regenerates_distrusted_node(workdir, capsys):
    before = snapshot(workdir)
    write(node_path(workdir, 2), b"\x02" * len(before[2]))  # plausible garbage
    rc = cli.main(["decode", str(workdir / "nodes"), "--missing", "2"])
    assert rc == 0
    assert read(node_path(workdir, 2)) == before[2]


def test_rebuild_node_flag_must_match(workdir, capsys):
    os.remove(node_path(workdir, 1))
    rc = cli.main(["rebuild", str(workdir / "nodes"), "--node", "3"])
    assert rc == 3
    assert read(node_path(workdir, 3))  # untouched
    assert cli.main(["rebuild", str(workdir / "nodes"), "--node", "1"]) == 0


def test_scrub_clean(workdir, capsys):
    rc = cli.main(["scrub", str(workdir / "nodes")])
    assert rc == 0
    assert "no error" in capsys.readouterr().out


def test_scrub_locates_corrupted_node(workdir, capsys):
    before = snapshot(workdir)
    blob = bytearray(before[2])
    for pos in range(0, 40, 7):
        blob[pos] = (blob[pos] + 1) % 3   # stay inside the gf(3) alphabet
    write(node_path(workdir, 2), bytes(blob))
    rc = cli.main(["scrub", str(workdir / "nodes")])
    out = capsys.readouterr().out
    assert rc == 0
    assert "corrected node_02" in out
    assert snapshot(workdir) == before


def test_scrub_handles_out_of_range_symbols(workdir, capsys):
    before = snapshot(workdir)
    blob = bytearray(before[1])
    blob[5] = 0xFF   # not a gf(3) symbol at all
    write(node_path(workdir, 1), bytes(blob))
    rc = cli.main(["scrub", str(workdir / "nodes")])
    out = capsys.readouterr().out
    assert rc == 0
    assert "corrected node_01" in out
    assert snapshot(workdir) == before


def test_scrub_two_corrupted_nodes_uncorrectable(workdir, capsys):
    for node in (0, 2):
        blob = bytearray(read(node_path(workdir, node)))
        blob[0] = (blob[0] + 1) % 3
        write(node_path(workdir, node), bytes(blob))
    rc = cli.main(["scrub", str(workdir / "nodes")])
    assert rc == 2
    assert "uncorrectable" in capsys.readouterr().out


def test_empty_payload(tmp_path, capsys):
    cfg = tmp_path / "code.cfg"
    cfg.write_text(CONFIG_53)
    empty = tmp_path / "empty.bin"
    empty.write_bytes(b"")
    out = tmp_path / "nodes"
    assert cli.main(["encode", str(empty), "--config", str(cfg), "--out", str(out)]) == 0
    mf = read_manifest(str(out / "manifest"))
    assert mf.stripe_count == 0 and mf.payload_length == 0
    os.remove(out / "node_02")
    assert cli.main(["rebuild", str(out)]) == 0
    back = tmp_path / "back.bin"
    assert cli.main(["decode", str(out), "--out", str(back)]) == 0
    assert back.read_bytes() == b""


def test_duplicated_average_ratio(tmp_path, capsys):
    cfg = tmp_path / "code.cfg"
    cfg.write_text(CONFIG_DUP)
    payload = tmp_path / "p.bin"
    payload.write_bytes(bytes(range(120)))
    out = tmp_path / "nodes"
    assert cli.main(["encode", str(payload), "--config", str(cfg), "--out", str(out)]) == 0
    capsys.readouterr()
    ratios = []
    for node in range(6):
        data = read(out / node_filename(node))
        os.remove(out / node_filename(node))
        assert cli.main(["rebuild", str(out)]) == 0
        printed = capsys.readouterr().out
        match = re.search(r"ratio (\d+)(?:/(\d+))?", printed)
        ratios.append(Fraction(int(match.group(1)), int(match.group(2) or 1)))
        assert read(out / node_filename(node)) == data
    assert sum(ratios, Fraction(0)) / 6 == Fraction(4, 7)


def test_even_field_config_roundtrip(tmp_path):
    cfg = tmp_path / "code.cfg"
    cfg.write_text("family=standard\nm=2\ns=2\nscheme=cons4\nfield=gf(2^2)\n")
    payload = tmp_path / "p.bin"
    payload.write_bytes(bytes(range(200)))
    out = tmp_path / "nodes"
    assert cli.main(["encode", str(payload), "--config", str(cfg), "--out", str(out)]) == 0
    os.remove(out / node_filename(2))
    os.remove(out / node_filename(6))
    back = tmp_path / "back.bin"
    assert cli.main(["decode", str(out), "--out", str(back)]) == 0
    assert back.read_bytes() == payload.read_bytes()


def test_verify_report(tmp_path, capsys):
    cfg = tmp_path / "code.cfg"
    cfg.write_text("family=standard\nm=3\nscheme=cons3\n")
    assert cli.main(["verify", "--config", str(cfg)]) == 0
    out = capsys.readouterr().out
    assert "MDS: yes (checked 21 patterns)" in out


def test_verify_and_ratio_three_parities(tmp_path, capsys):
    cfg = tmp_path / "code.cfg"
    cfg.write_text("family=standard\nm=2\nr=3\nscheme=r3\n")
    assert cli.main(["verify", "--config", str(cfg)]) == 0
    assert "MDS: yes" in capsys.readouterr().out
    assert cli.main(["ratio", "--config", str(cfg)]) == 0
    out = capsys.readouterr().out
    assert "1/3" in out and "gf(7)" in out


def test_ratio_report_large_duplication(tmp_path, capsys):
    cfg = tmp_path / "code.cfg"
    cfg.write_text("family=standard\nm=10\ns=6\nscheme=cons4\n")
    assert cli.main(["ratio", "--config", str(cfg)]) == 0
    out = capsys.readouterr().out
    assert "36/67" in out and "0.537" in out
    assert "gf(7)" in out
    assert "ratio_predicted_num=36" in out


def test_ratio_report_small(tmp_path, capsys):
    cfg = tmp_path / "code.cfg"
    cfg.write_text(CONFIG_53)
    assert cli.main(["ratio", "--config", str(cfg)]) == 0
    out = capsys.readouterr().out
    assert "ratio_measured_num=1" in out and "ratio_measured_den=2" in out


def test_dump_coefficients_golden(tmp_path, capsys):
    cfg = tmp_path / "code.cfg"
    cfg.write_text(CONFIG_53)
    assert cli.main(["dump-coefficients", "--config", str(cfg)]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    # per the scheme rule with prefix vectors (0,0), (1,0), (1,1):
    # column 0 always 1; column 1 doubles on rows with first digit 1;
    # column 2 doubles on rows with odd digit sum
    assert lines == [
        "0 0 1 1", "0 1 1 1", "0 2 1 1",
        "1 0 1 1", "1 1 1 1", "1 2 1 2",
        "2 0 1 1", "2 1 1 2", "2 2 1 2",
        "3 0 1 1", "3 1 1 2", "3 2 1 1",
    ]


def test_config_errors(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("family=standard\nm=2\nscheme=mystery\n")
    assert cli.main(["verify", "--config", str(bad)]) == 3
    bad.write_text("volume=11\n")
    assert cli.main(["verify", "--config", str(bad)]) == 3
    bad.write_text("family=standard\nm=2\nscheme=cons3\nfield=gf(4)\n")
    assert cli.main(["verify", "--config", str(bad)]) == 3
    bad.write_text("family=standard\nm=2\nscheme=table\n")
    assert cli.main(["verify", "--config", str(bad)]) == 3
    assert cli.main(["verify", "--config", str(tmp_path / "absent.cfg")]) == 3


def test_manifest_validation(workdir, capsys):
    manifest = workdir / "nodes" / "manifest"
    blob = bytearray(read(manifest))
    blob[0] ^= 0xFF
    write(manifest, bytes(blob))
    assert cli.main(["scrub", str(workdir / "nodes")]) == 3
    assert "magic" in capsys.readouterr().err

    blob[0] ^= 0xFF
    blob[6] = 9  # unsupported version
    write(manifest, bytes(blob))
    assert cli.main(["scrub", str(workdir / "nodes")]) == 3
    assert "version" in capsys.readouterr().err


def test_missing_manifest(tmp_path, capsys):
    os.makedirs(tmp_path / "nothing")
    assert cli.main(["rebuild", str(tmp_path / "nothing")]) == 3


def test_symbol_packing_roundtrip(tmp_path):
    from zzmds import files as zf
    data = bytes(range(256))
    for q in (2, 3, 4, 5, 7, 9, 16, 251, 257, 65521):
        symbols = zf.bytes_to_symbols(data, q)
        assert len(symbols) == 256 * zf.digits_per_byte(q)
        assert all(0 <= v < q for v in symbols)
        assert zf.symbols_to_bytes(symbols, q, 256) == data
        path = tmp_path / f"stream_{q}"
        zf.write_node_file(str(path), symbols, q)
        assert zf.read_node_file(str(path), q) == symbols
    # a symbol group that decodes past one byte is corruption
    with pytest.raises(zf.FormatError):
        zf.symbols_to_bytes([2, 2, 2, 2, 2, 2], 3, 1)  # 728 > 255
    with pytest.raises(zf.FormatError):
        zf.symbols_to_bytes([1, 1], 3, 1)  # short stream
