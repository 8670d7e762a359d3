"""
Tests for the command line.
"""

import json

import pytest

from src.cli import main

FIGURE_GRAPH = (
    "1 2\n2 3\n2 4\n2 5\n1 3\n4 5\n"
    "6 7\n7 8\n7 9\n8 9\n8 10\n9 10\n"
    "3 6\n5 6\n"
)
FIGURE_REFERENCE = "".join(f"{n} {'L' if n <= 5 else 'R'}\n" for n in range(1, 11))
HUB_MOVED = "".join(f"{n} {'L' if n in (1, 3, 4, 5) else 'R'}\n" for n in range(1, 11))
BOUNDARY_MOVED = "".join(f"{n} {'L' if n <= 6 else 'R'}\n" for n in range(1, 11))


@pytest.fixture(autouse=True)
def isolated(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv('COMMEVAL_SEED', raising=False)


@pytest.fixture
def figure_files(write):
    return {
        'graph': write("figure.edges", FIGURE_GRAPH),
        'reference': write("reference.comm", FIGURE_REFERENCE),
        'hub': write("hub.comm", HUB_MOVED),
        'boundary': write("boundary.comm", BOUNDARY_MOVED),
    }


def error_line(capsys) -> str:
    err = capsys.readouterr().err
    lines = err.splitlines()
    assert len(lines) == 1, err
    assert lines[0].startswith("error: ")
    return lines[0]


class TestEval:

    def test_identity(self, figure_files, capsys):
        code = main(['eval', '--graph', figure_files['graph'], '--reference', figure_files['reference'],
                     '--predicted', figure_files['reference']])
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        measures = report['results'][0]['measures']
        assert measures['f_measure'] == 1.0
        assert measures['topo_f_measure'] == 1.0
        assert report['inputs']['graph']['path'] == figure_files['graph']
        assert len(report['inputs']['graph']['sha256']) == 64

    def test_figure_scores(self, figure_files, capsys):
        code = main(['eval', '--graph', figure_files['graph'], '--reference', figure_files['reference'],
                     '--predicted', figure_files['hub'], figure_files['boundary'],
                     '--measures', 'f_measure,topo_f_measure'])
        assert code == 0
        hub, boundary = json.loads(capsys.readouterr().out)['results']
        assert hub['measures']['f_measure'] == boundary['measures']['f_measure'] == 0.9
        assert hub['measures']['topo_f_measure'] == pytest.approx(5 / 6, abs=1e-11)
        assert boundary['measures']['topo_f_measure'] == pytest.approx(5.75 / 6, abs=1e-11)
        assert 'purity' not in hub['measures']

    def test_output_is_reproducible(self, figure_files, capsys):
        argv = ['eval', '--graph', figure_files['graph'], '--reference', figure_files['reference'],
                '--predicted', figure_files['hub'], figure_files['boundary'], '--workers', '2']
        main(argv)
        first = capsys.readouterr().out
        main(argv)
        assert capsys.readouterr().out == first

    def test_csv_with_contributions(self, figure_files, capsys):
        code = main(['eval', '--graph', figure_files['graph'], '--reference', figure_files['reference'],
                     '--predicted', figure_files['hub'], '--format', 'csv', '--contributions'])
        assert code == 0
        summary, contributions = capsys.readouterr().out.split("\n\n")
        assert summary.splitlines()[0].startswith("predicted,")
        rows = contributions.strip().splitlines()
        assert rows[0] == "predicted,node,community,weight,share,purity,lost"
        assert len(rows) == 11

    def test_uncovered_node(self, figure_files, write, capsys):
        partial = write("partial.comm", "".join(f"{n} A\n" for n in range(1, 10)))
        code = main(['eval', '--graph', figure_files['graph'], '--reference', figure_files['reference'],
                     '--predicted', partial])
        assert code == 2
        assert "uncovered node: 10" in error_line(capsys)

    def test_malformed_graph(self, figure_files, write, capsys):
        graph = write("bad.edges", "1 2\n3 3\n")
        code = main(['eval', '--graph', graph, '--reference', figure_files['reference'],
                     '--predicted', figure_files['reference']])
        assert code == 2
        assert ":2:" in error_line(capsys)

    def test_zero_weights(self, write, capsys):
        graph = write("cross.edges", "1 2\n3 4\n")
        reference = write("cross.comm", "1 A\n3 A\n2 B\n4 B\n")
        argv = ['eval', '--graph', graph, '--reference', reference, '--predicted', reference]
        assert main(argv) == 3
        error_line(capsys)
        assert main(argv + ['--on-zero-weights', 'uniform']) == 0
        report = json.loads(capsys.readouterr().out)
        assert report['warnings']

    def test_unknown_measure(self, figure_files, capsys):
        code = main(['eval', '--graph', figure_files['graph'], '--reference', figure_files['reference'],
                     '--predicted', figure_files['hub'], '--measures', 'accuracy'])
        assert code == 1
        error_line(capsys)


class TestGenerate:

    def test_planted_without_mixing(self, tmp_path, capsys):
        code = main(['generate', 'planted', '--nodes', '100', '--communities', '4', '--mu', '0',
                     '--avg-degree', '10', '--output-graph', str(tmp_path / "g.edges"),
                     '--output-communities', str(tmp_path / "g.comm")])
        assert code == 0
        out = capsys.readouterr().out.strip()
        assert out.startswith("nodes=100 edges=")
        assert out.endswith("mixing=0.0")

    def test_same_seed_same_files(self, tmp_path):
        for run in ("a", "b"):
            assert main(['generate', 'lfr', '--nodes', '200', '--avg-degree', '10', '--max-degree', '30',
                         '--seed', '5', '--output-graph', str(tmp_path / f"{run}.edges"),
                         '--output-communities', str(tmp_path / f"{run}.comm")]) == 0
        assert (tmp_path / "a.edges").read_bytes() == (tmp_path / "b.edges").read_bytes()
        assert (tmp_path / "a.comm").read_bytes() == (tmp_path / "b.comm").read_bytes()

    def test_mixing_out_of_range(self, tmp_path, capsys):
        code = main(['generate', 'planted', '--mu', '1.5', '--output-graph', str(tmp_path / "g.edges"),
                     '--output-communities', str(tmp_path / "g.comm")])
        assert code == 1
        error_line(capsys)
        assert not (tmp_path / "g.edges").exists()

    def test_infeasible_configuration(self, tmp_path, capsys):
        code = main(['generate', 'planted', '--nodes', '20', '--communities', '10', '--mu', '0',
                     '--avg-degree', '5', '--output-graph', str(tmp_path / "g.edges"),
                     '--output-communities', str(tmp_path / "g.comm")])
        assert code == 3
        error_line(capsys)

    def test_environment_seed_overrides_flag(self, tmp_path, monkeypatch):
        def run(name, seed):
            assert main(['generate', 'planted', '--nodes', '100', '--communities', '4',
                         '--avg-degree', '10', '--seed', seed,
                         '--output-graph', str(tmp_path / f"{name}.edges"),
                         '--output-communities', str(tmp_path / f"{name}.comm")]) == 0
            return (tmp_path / f"{name}.edges").read_bytes()

        plain = run("plain", "9")
        monkeypatch.setenv('COMMEVAL_SEED', '9')
        assert run("env", "1") == plain

    def test_config_file(self, tmp_path, write, capsys):
        params = write("planted.env", "nodes=60\ncommunities=3\nmu=0\navg_degree=6\n")
        code = main(['generate', 'planted', '--config-file', params,
                     '--output-graph', str(tmp_path / "g.edges"),
                     '--output-communities', str(tmp_path / "g.comm")])
        assert code == 0
        out = capsys.readouterr().out
        assert out.startswith("nodes=60 ")
        assert "mixing=0.0" in out

    def test_config_file_unknown_key(self, tmp_path, write, capsys):
        params = write("planted.env", "size=60\n")
        code = main(['generate', 'planted', '--config-file', params,
                     '--output-graph', str(tmp_path / "g.edges"),
                     '--output-communities', str(tmp_path / "g.comm")])
        assert code == 1
        assert "size" in error_line(capsys)

    def test_unwritable_output(self, tmp_path, write, capsys):
        blocker = write("afile", "not a directory\n")
        code = main(['generate', 'planted', '--nodes', '100', '--communities', '4', '--avg-degree', '10',
                     '--output-graph', f"{blocker}/g.edges",
                     '--output-communities', str(tmp_path / "g.comm")])
        assert code == 2
        assert "afile" in error_line(capsys)

    def test_lfr_degrees_all_at_cap(self, tmp_path, capsys):
        code = main(['generate', 'lfr', '--nodes', '101', '--avg-degree', '5', '--max-degree', '5',
                     '--min-community', '20', '--max-community', '50', '--seed', '1',
                     '--output-graph', str(tmp_path / "g.edges"),
                     '--output-communities', str(tmp_path / "g.comm")])
        assert code == 0
        assert capsys.readouterr().out.startswith("nodes=101 ")


class TestRank:

    def test_identical_scores_one_row(self, write, capsys):
        rows = "".join(f"{a},n{i},0.5\n" for a in "abc" for i in range(3))
        path = write("scores.csv", "algorithm,network,score\n" + rows)
        assert main(['rank', path, '--format', 'json']) == 0
        table = json.loads(capsys.readouterr().out)
        assert table['rows'] == [{'rank': 1, 'algorithms': ['a', 'b', 'c'], 'means': [0.5, 0.5, 0.5]}]
        assert table['significant_pairs'] == []

    def test_two_groups(self, write, capsys):
        text = "algorithm,network,score\n" + "".join(
            f"{a},n{i},{v}\n" for a, values in (('first', (7, 8, 9)), ('second', (1, 2, 3)))
            for i, v in enumerate(values)
        )
        path = write("scores.csv", text)
        assert main(['rank', path, '--format', 'json']) == 0
        table = json.loads(capsys.readouterr().out)
        assert [(row['rank'], row['algorithms']) for row in table['rows']] == [(1, ['first']), (2, ['second'])]

    def test_text_output(self, write, capsys):
        rows = "".join(f"{a},n{i},{0.1 * (i + 1)}\n" for a in "ab" for i in range(3))
        path = write("f_measure.csv", "algorithm,network,score\n" + rows)
        assert main(['rank', path, '--format', 'text', '--alpha', '0.01']) == 0
        assert capsys.readouterr().out.startswith("Ranking by f_measure (alpha=0.01)")

    def test_bad_header(self, write, capsys):
        path = write("scores.csv", "algo,net,value\na,n1,1\n")
        assert main(['rank', path]) == 2
        error_line(capsys)

    def test_alpha_out_of_range(self, write, capsys):
        path = write("scores.csv", "algorithm,network,score\na,n1,1\n")
        assert main(['rank', path, '--alpha', '1.5']) == 1
        error_line(capsys)


class TestExperiment:

    def test_small_planted_run(self, tmp_path, capsys):
        out_dir = tmp_path / "run"
        code = main(['experiment', '--output-dir', str(out_dir), '--generator', 'planted',
                     '--networks', '2', '--nodes', '200', '--seed', '4'])
        assert code == 0
        assert {p.name for p in out_dir.iterdir()} == {
            'f_measure.csv', 'topo_f_measure.csv', 'targeted.csv', 'report.json'
        }
        report = json.loads((out_dir / "report.json").read_text(encoding='utf-8'))
        assert set(report['rankings']) == {'f_measure', 'topo_f_measure'}
        assert report['config']['seed'] == 4
        assert "targeted:" in capsys.readouterr().out


class TestUsage:

    def test_missing_subcommand(self, capsys):
        assert main([]) == 1
        error_line(capsys)

    def test_missing_config(self, capsys):
        assert main(['rank', 'scores.csv', '--config', 'missing.yaml']) == 1
        error_line(capsys)

    def test_version(self, capsys):
        assert main(['--version']) == 0
        assert capsys.readouterr().out.startswith("commeval ")

    def test_non_numeric_config_value(self, write, capsys):
        config = write("bad.yaml", "evaluation:\n  workers: abc\n")
        assert main(['rank', 'scores.csv', '--config', config]) == 1
        assert "evaluation.workers" in error_line(capsys)

    def test_unwritable_experiment_dir(self, write, capsys):
        blocker = write("afile", "not a directory\n")
        code = main(['experiment', '--output-dir', f"{blocker}/run", '--generator', 'planted',
                     '--networks', '2', '--nodes', '200'])
        assert code == 2
        error_line(capsys)
