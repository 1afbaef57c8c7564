import re
import subprocess
import sys


from boolgen.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_sp_and_lasp(capsys):
    assert run(capsys, "sp", "--k", "32")[:2] == (0, "601080390\n")
    assert run(capsys, "lasp", "--n", "1000")[:2] == (0, "13\n")
    assert run(capsys, "lasp", "--n", "1000000000")[1] == "33\n"


def test_domain_error_exit_code(capsys):
    code, out, err = run(capsys, "sp", "--k", "0")
    assert code == 1 and out == "" and err.startswith("error:")
    assert run(capsys, "genset", "construct", "--n", "1")[0] == 1
    assert run(capsys, "term", "eval", "--term", "(& x1", "--n", "4", "--h", "1,2")[0] == 1


def test_capacity_error_exit_code(capsys):
    code, _, err = run(capsys, "genset", "minsearch", "--n", "9")
    assert code == 2 and err.startswith("capacity error:")


def test_genset_commands(capsys):
    assert run(capsys, "genset", "check", "--n", "2", "--elems", "1,2")[1] == "generating=true\n"
    assert run(capsys, "genset", "check", "--n", "2", "--elems", "1,3")[1] == "generating=false\n"
    out = run(capsys, "genset", "construct", "--n", "6")[1]
    assert out == "n=6 k=4 elems=07,19,2a,34\n"
    assert run(capsys, "genset", "minsearch", "--n", "5")[1] == "n=5 min_size=4 lasp=4\n"


def test_sample_line_is_deterministic(capsys):
    argv = ["genset", "sample", "--n", "200", "--k", "30", "--trials", "40", "--seed", "7"]
    first = run(capsys, *argv)[1]
    second = run(capsys, *argv)[1]
    pattern = r"n=200 k=30 tested=40 generating=(\d+) seed=7 seconds=\d+\.\d{3}\n"
    assert re.fullmatch(pattern, first)
    assert first.split(" seconds=")[0] == second.split(" seconds=")[0]


def test_term_commands(capsys):
    assert run(capsys, "term", "eval", "--term", "(| x1 x2)", "--n", "4", "--h", "1,4")[1] == "5\n"
    a = run(capsys, "term", "random", "--b", "3", "--k", "4", "--seed", "1")[1]
    assert a.startswith("termvec k=4 b=3\n") and a == run(capsys, "term", "random", "--b", "3", "--k", "4", "--seed", "1")[1]


def test_protocol_commands(capsys):
    code, out, _ = run(capsys, "protocol", "demo", "--seed", "1", "--message", "hello bank")
    assert code == 0
    assert out.splitlines()[-1] == "delivered=true plaintext='hello bank'"
    assert [ln.split()[1] for ln in out.splitlines()[:3]] == ["kind=TermRequest", "kind=TermReply", "kind=CipherBundle"]
    assert out == run(capsys, "protocol", "demo", "--seed", "1", "--message", "hello bank")[1]
    assert run(capsys, "protocol", "authenticate", "--seed", "2")[1] == "impostor=false accepted=true\n"
    assert run(capsys, "protocol", "authenticate", "--seed", "2", "--impostor")[1] == "impostor=true accepted=false\n"
    out = run(capsys, "protocol", "tamper-test", "--trials", "3", "--seed", "0", "--n", "64", "--k", "30", "--b", "100")[1]
    assert out.startswith("trials=3 bank_rejected=3")


def test_protocol_rejects_non_ascii(capsys):
    assert run(capsys, "protocol", "demo", "--seed", "1", "--message", "héllo")[0] == 1


def test_reduce_commands(tmp_path, capsys):
    graph = tmp_path / "k3.txt"
    graph.write_text("t 3\ne 1 2\ne 2 3\ne 1 3\n")
    system = tmp_path / "k3.eqs"
    assert run(capsys, "reduce", "encode", "--graph", str(graph), "--out", str(system))[0] == 0
    assert system.read_text().startswith("eqsys n=1 k=9 b=3\n")
    assert run(capsys, "reduce", "solve", "--system", str(system))[1].startswith("solvable=true solution=")
    out = run(capsys, "reduce", "roundtrip", "--graph", str(graph))[1]
    assert out.startswith("t=3 edges=3 solvable=true oracle=true agree=true coloring=")

    k4 = tmp_path / "k4.txt"
    k4.write_text("t 4\n" + "".join(f"e {i} {j}\n" for i in range(1, 5) for j in range(i + 1, 5)))
    assert run(capsys, "reduce", "roundtrip", "--graph", str(k4))[1] == "t=4 edges=6 solvable=false oracle=false agree=true\n"
    assert run(capsys, "reduce", "solve", "--system", str(tmp_path / "missing"))[0] == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "boolgen", "sp", "--k", "33"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "1166803110\n"
