#!/usr/bin/env python
#  -*- coding: utf-8 -*-

import json
import math

import pytest

from roundlab_cli import main
from roundlab import rlio, roundness
from roundlab.roundness import ViolationCertificate, GonConfiguration
from roundlab.tools import JOBS_ENV_VAR


def _run(*argv):
    return main(['-q'] + [str(arg) for arg in argv])


def _load(filename):
    with open(filename) as f:
        return json.load(f)


def test_banner(capsys):
    assert main(['info', 'roundlab/tests/data/c4.json']) == 0
    out = capsys.readouterr().out
    assert 'roundlab - version' in out
    assert 'SPACE NAME : c4' in out

    assert _run('info', 'roundlab/tests/data/c4.json') == 0
    assert 'roundlab - version' not in capsys.readouterr().out


def test_gr_exact_values(tmp_path):
    outfilename = tmp_path / 'c4_gr.json'
    assert _run('gr', 'roundlab/tests/data/c4.json', '-o', outfilename) == 0
    doc = _load(outfilename)
    assert doc['result']['p_star'] == pytest.approx(1., abs=1e-4)
    assert doc['manifest']['command'] == 'gr'
    assert doc['manifest']['input_hashes']

    rows, manifest = rlio.load_csv(str(tmp_path / 'c4_gr.csv'))
    assert len(rows) == 1
    assert rows[0]['space_id'] == 'c4'
    assert rows[0]['n_points'] == 4
    assert rows[0]['p_star'] == pytest.approx(1., abs=1e-4)
    assert manifest.command == 'gr'

    space_file = tmp_path / 'p3.json'
    assert _run('gen', 'path', '--n', 3, '-o', space_file) == 0
    assert _run('gr', space_file, '-o', tmp_path / 'p3_gr.json') == 0
    assert _load(tmp_path / 'p3_gr.json')['result']['p_star'] == pytest.approx(2., abs=1e-4)

    space_file = tmp_path / 'two.json'
    with open(space_file, 'w') as f:
        json.dump({'labels': ['x', 'y'], 'dist': [[0, 1.5], [1.5, 0]]}, f)
    assert _run('gr', space_file, '--pmax', 8.0) == 0
    doc = _load(tmp_path / 'two_gr.json')
    assert doc['result']['capped']
    assert doc['result']['p_star'] == 8.


def test_pipeline(tmp_path):
    square = tmp_path / 'square.json'
    assert _run('gen', 'hypercube', '--n', 2, '-o', square) == 0
    assert _run('embed', 'l1', square, '-o', tmp_path / 'emb.json') == 0
    doc = _load(tmp_path / 'emb.json')
    assert doc['kind'] == 'l1_embedding'
    assert doc['dimension'] == 2
    assert sorted(len(support) for support in doc['vectors']) == [0, 1, 1, 2]

    assert _run('gr', square) == 0
    assert _load(tmp_path / 'square_gr.json')['result']['p_star'] == pytest.approx(1., abs=1e-4)

    square_edges = tmp_path / 'square.txt'
    assert _run('gen', 'hypercube', '--n', 2, '-o', square_edges) == 0
    assert _run('embed', 'l1', square_edges, '--check-median', '--basepoint', 3) == 0
    assert _load(tmp_path / 'square_l1.json')['basepoint'] == 3


def test_search(tmp_path):
    space_file = tmp_path / 'p3.json'
    assert _run('gen', 'path', '--n', 3, '-o', space_file) == 0
    outfilename = tmp_path / 'search.json'
    assert _run('search', space_file, '--p', 2.2, '--curve', '--pmax', 3, '-o', outfilename) == 0
    doc = _load(outfilename)
    assert doc['found']
    assert doc['certificate']['deficiency'] == pytest.approx(-0.595, abs=1e-3)
    assert doc['certificate']['config']['a'] == [0, 2]
    assert doc['certificate']['config']['b'] == [1, 1]
    assert len(doc['curve']) == 30

    assert _run('search', space_file, '--p', 1.9, '--max-n', 3, '-o', outfilename) == 0
    assert not _load(outfilename)['found']

    assert _run('search', space_file, '--p', 2.5, '--strategy', 'local', '--budget', 2000, '--jobs', 2,
                '-o', outfilename) == 0
    assert _load(outfilename)['found']


def test_reproducible_payloads(tmp_path, monkeypatch):
    monkeypatch.setenv(JOBS_ENV_VAR, '2')
    space_file = tmp_path / 'c4.json'
    assert _run('gen', 'cycle', '--n', 4, '-o', space_file) == 0
    docs = []
    for name in ('first.json', 'second.json'):
        assert _run('search', space_file, '--p', 1.5, '--strategy', 'random', '--budget', 3000, '--seed', 11,
                    '-o', tmp_path / name) == 0
        doc = _load(tmp_path / name)
        del doc['manifest']['timestamp']
        del doc['manifest']['parameters']['outfilename']
        docs.append(doc)
    assert docs[0] == docs[1]

    docs = []
    for name in ('first_gr.json', 'second_gr.json'):
        assert _run('gr', space_file, '-o', tmp_path / name) == 0
        doc = _load(tmp_path / name)
        assert doc['manifest']['runtime_ms'] >= 0.
        for key in ('timestamp', 'runtime_ms'):
            del doc['manifest'][key]
        del doc['manifest']['parameters']['outfilename']
        docs.append(doc)
    assert docs[0] == docs[1]


def test_gns(tmp_path, capsys):
    assert _run('embed', 'gns', 'roundlab/tests/data/c4.json', '--p', 1., '-o', tmp_path / 'gns.json') == 0
    doc = _load(tmp_path / 'gns.json')
    assert doc['kind'] == 'gns_embedding'
    assert doc['labels'] == ['a', 'b', 'c', 'd']

    assert _run('embed', 'gns', 'roundlab/tests/data/c4.json', '--p', 2., '-o', tmp_path / 'gns.json') == 2
    assert 'eigenvalue' in capsys.readouterr().err


def test_gns_vtp(tmp_path):
    pytest.importorskip('vtk')
    outfilename = str(tmp_path / 'gns.vtp')
    assert _run('embed', 'gns', 'roundlab/tests/data/c4.json', '--p', 1., '--seed', 3, '-o', outfilename) == 0
    manifest = rlio.load_vtp_manifest(outfilename)
    assert manifest.command == 'embed'
    assert manifest.seed == 3
    assert 'roundlab/tests/data/c4.json' in manifest.input_hashes


def test_sweep(tmp_path):
    outfilename = tmp_path / 'cubes.csv'
    assert _run('sweep', '--family', 'hypercube', '--radii', '1..3', '-o', outfilename) == 0
    rows, manifest = rlio.load_csv(str(outfilename))
    assert [row['n_points'] for row in rows] == [2, 4, 8]
    assert rows[0]['capped']
    assert rows[1]['p_star'] == pytest.approx(1., abs=1e-4)
    assert rows[2]['p_star'] == pytest.approx(1., abs=1e-4)
    assert manifest.parameters['radii'] == [1, 3]

    outfilename = tmp_path / 'zn.csv'
    assert _run('sweep', '--family', 'zn', '--rank', 2, '--radii', '1..2', '--jobs', 2, '-o', outfilename) == 0
    rows, _ = rlio.load_csv(str(outfilename))
    assert [row['space_id'] for row in rows] == ['zn_r2_R1', 'zn_r2_R2']
    assert rows[1]['p_star'] == pytest.approx(1., abs=1e-4)


def test_sweep_size_cap(tmp_path):
    outfilename = tmp_path / 'cubes.csv'
    with pytest.warns(UserWarning):
        assert _run('sweep', '--family', 'hypercube', '--radii', '13..13', '-o', outfilename) == 0
    rows, _ = rlio.load_csv(str(outfilename))
    assert rows[0]['space_id'] == 'hypercube_rank0_radius13'
    assert rows[0]['n_points'] == 0
    assert math.isnan(rows[0]['p_star'])


def test_gen_families(tmp_path):
    outfilename = tmp_path / 'lp.json'
    assert _run('gen', 'lp', '--p', 1.5, '--dim', 3, '--count', 8, '--seed', 7, '-o', outfilename) == 0
    assert len(_load(outfilename)['labels']) == 8

    outfilename = tmp_path / 'free.json'
    assert _run('gen', 'free', '--rank', 2, '--radius', 2, '-o', outfilename) == 0
    assert _load(outfilename)['labels'][0] == 'e'

    outfilename = tmp_path / 'star.json'
    assert _run('gen', 'edges', '--edges', 'roundlab/tests/data/star.txt', '-o', outfilename) == 0
    assert len(_load(outfilename)['edges']) == 3

    assert _run('gen', 'zn', '--rank', 2, '-o', outfilename) == 2


def test_exit_codes(tmp_path, capsys):
    assert _run('gr', 'roundlab/tests/data/not_metric.json') == 2
    assert 'not_metric.json' in capsys.readouterr().err
    with pytest.warns(UserWarning):
        assert _run('info', 'roundlab/tests/data/not_metric.json', '--force') == 0

    assert _run('gr', tmp_path / 'missing.json') == 2

    assert _run('embed', 'l1', 'roundlab/tests/data/bad_edges.txt') == 2
    assert 'bad_edges.txt:3' in capsys.readouterr().err

    hexagon = tmp_path / 'hexagon.txt'
    assert _run('gen', 'cycle', '--n', 6, '-o', hexagon) == 0
    assert _run('embed', 'l1', hexagon) == 2
    assert 'Not a cubical skeleton' in capsys.readouterr().err

    assert _run('embed', 'l1', 'roundlab/tests/data/c4.json') == 2

    assert _run('gen', 'hypercube', '--n', 13, '-o', tmp_path / 'big.json') == 3
    assert 'size cap' in capsys.readouterr().err


def test_inconsistency_exit_code(tmp_path, monkeypatch, capsys):
    spurious = ViolationCertificate(GonConfiguration([0, 2], [1, 3]), 0.9, -1., 'exhaustive')
    monkeypatch.setattr(roundness, 'search_violation', lambda *args, **kwargs: spurious)
    assert _run('gr', 'roundlab/tests/data/c4.json', '-o', tmp_path / 'gr.json') == 2
    assert 'Inconsistent roundness' in capsys.readouterr().err
