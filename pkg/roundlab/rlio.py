#!/usr/bin/env python
#  -*- coding: utf-8 -*-
"""Readers and writers of the files handled by roundlab.

Spaces are stored as JSON ({"labels": [...], "dist": [[...], ...]}, optionally "name" and "edges"), graphs as edge
lists (one "u v" pair of integer ids per line, '#' starting a comment). Certificates, roundness results and
embeddings are JSON documents tagged by a "kind" key. Summary tables are CSV files preceded by '#' lines holding
the run manifest.
"""

import os
import csv
import json
import time
import warnings

import numpy as np

from . import __version__
from .metric import FiniteMetricSpace
from .generators import Graph, load_graph
from .negative_type import NegTypeCertificate, PStarResult, EuclideanConfiguration
from .roundness import ViolationCertificate
from .cubical import L1Embedding
from .tools import sha256_file
from .exceptions import FormatError, MetricError

__author__ = "roundlab developers"
__licence__ = "GPLv3"
__status__ = "Development"

CSV_COLUMNS = ('space_id', 'n_points', 'p_star', 'capped', 'tol', 'p_max', 'runtime_ms', 'seed')

_CSV_TYPES = {'space_id': str,
              'n_points': int,
              'p_star': float,
              'capped': lambda value: value == 'True',
              'tol': float,
              'p_max': float,
              'runtime_ms': float,
              'seed': int}


def _check_file(filename):
    if not os.path.isfile(filename):
        raise IOError("file %s not found" % filename)
    return


class RunManifest(object):
    """Provenance of a result file.

    Parameters
    ----------
    command : str
        The sub-command that produced the file
    parameters : dict, optional
        Its parameters, JSON serializable
    seed : int, optional
    version : str, optional
        Default is the installed roundlab version
    timestamp : str, optional
        Default is the current local time
    input_hashes : dict, optional
        sha256 digests of the input files, by file name
    runtime_ms : float, optional
        Wall clock duration of the computation. Like the timestamp, it varies between identical runs.
    """
    def __init__(self, command, parameters=None, seed=None, version=None, timestamp=None, input_hashes=None,
                 runtime_ms=None):
        self.command = str(command)
        self.parameters = dict() if parameters is None else dict(parameters)
        self.seed = None if seed is None else int(seed)
        self.version = __version__ if version is None else str(version)
        self.timestamp = time.strftime('%Y-%m-%dT%H:%M:%S') if timestamp is None else str(timestamp)
        self.input_hashes = dict() if input_hashes is None else dict(input_hashes)
        self.runtime_ms = None if runtime_ms is None else float(runtime_ms)

    @classmethod
    def collect(cls, command, parameters=None, seed=None, inputs=()):
        """Builds the manifest of a run, hashing its input files"""
        hashes = dict((str(filename), sha256_file(filename)) for filename in inputs)
        return cls(command, parameters, seed, input_hashes=hashes)

    def as_dict(self):
        return {'command': self.command,
                'parameters': self.parameters,
                'seed': self.seed,
                'version': self.version,
                'timestamp': self.timestamp,
                'input_hashes': self.input_hashes,
                'runtime_ms': self.runtime_ms}

    @classmethod
    def from_dict(cls, data):
        return cls(data['command'], data.get('parameters'), data.get('seed'), data.get('version'),
                   data.get('timestamp'), data.get('input_hashes'), data.get('runtime_ms'))

    def comment_lines(self):
        """The manifest as '# key: value' lines, values being JSON"""
        return ['# %s: %s' % (key, json.dumps(value, sort_keys=True)) for (key, value) in self.as_dict().items()]


# =======================================================================
# JSON DOCUMENTS
# =======================================================================

def load_json(filename, kind=None):
    """Loads a JSON document, optionally checking its "kind" tag.

    Raises
    ------
    IOError
        If the file does not exist
    FormatError
        If the file is not a JSON object of the expected kind. The message gives the line of decoding errors.
    """
    _check_file(filename)
    with open(filename, 'r') as f:
        text = f.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise FormatError('%s:%u: %s' % (filename, err.lineno, err.msg))
    if not isinstance(doc, dict):
        raise FormatError('%s: expected a JSON object' % filename)
    if kind is not None and doc.get('kind') != kind:
        raise FormatError('%s: expected a document of kind "%s", got "%s"' % (filename, kind, doc.get('kind')))
    return doc


def write_json(filename, doc, manifest=None):
    """Writes a JSON document, the manifest going under the "manifest" key"""
    doc = dict(doc)
    if manifest is not None:
        doc['manifest'] = manifest.as_dict()
    with open(filename, 'w') as f:
        json.dump(doc, f, indent=2)
        f.write('\n')


def _space_from_doc(doc, filename, force):
    if 'dist' not in doc:
        raise FormatError('%s: missing "dist" entry' % filename)
    dist = doc['dist']
    if not isinstance(dist, list) or not all(isinstance(row, list) for row in dist):
        raise FormatError('%s: "dist" must be a list of rows' % filename)
    try:
        dist = np.array(dist, dtype=float)
    except (TypeError, ValueError):
        raise FormatError('%s: "dist" must be a matrix of numbers' % filename)
    try:
        space = FiniteMetricSpace(dist, labels=doc.get('labels'), name=doc.get('name'), force=force)
    except MetricError as err:
        raise MetricError('%s: %s' % (filename, err), err.report)
    if not space.report.valid:
        warnings.warn('%s is not a metric, loaded anyway:\n%s' % (filename, space.report))
    return space


def load_space(filename, force=False):
    """Loads a FiniteMetricSpace from a JSON file.

    Parameters
    ----------
    filename : str
    force : bool, optional
        If True, a matrix violating the metric axioms is loaded anyway, with a warning

    Raises
    ------
    MetricError
        If the matrix is not a metric and force is False
    """
    return _space_from_doc(load_json(filename), filename, force)


def _load_json_input(filename, force=False):
    doc = load_json(filename)
    space = _space_from_doc(doc, filename, force)
    graph = None
    if doc.get('edges') is not None:
        try:
            graph = Graph(doc['edges'], labels=space.labels, name=space.name)
        except (TypeError, ValueError) as err:
            raise FormatError('%s: invalid "edges" entry: %s' % (filename, err))
    return graph, space


def write_space(filename, space, graph=None, manifest=None):
    """Writes a space, and the edges of its graph if given, as JSON"""
    if space.is_integral:
        dist = space.int_dist.tolist()
    else:
        dist = space.dist.tolist()
    doc = {'name': space.name,
           'labels': list(space.labels),
           'dist': dist}
    if graph is not None:
        doc['edges'] = [list(edge) for edge in graph.edges]
    write_json(filename, doc, manifest)


# =======================================================================
# EDGE LISTS
# =======================================================================

def load_edge_list(filename):
    """Reads an edge list: one "u v" pair of integer vertex ids per line.

    Blank lines are skipped and '#' starts a comment.

    Returns
    -------
    list of (int, int)

    Raises
    ------
    FormatError
        With the file name and line of the first malformed line
    """
    _check_file(filename)
    edges = []
    with open(filename, 'r') as f:
        for (lineno, line) in enumerate(f, start=1):
            content = line.split('#', 1)[0].split()
            if not content:
                continue
            if len(content) != 2:
                raise FormatError('%s:%u: expected "u v", got "%s"' % (filename, lineno, line.strip()))
            try:
                edges.append((int(content[0]), int(content[1])))
            except ValueError:
                raise FormatError('%s:%u: vertex ids must be integers, got "%s"' % (filename, lineno, line.strip()))
    if not edges:
        raise FormatError('%s: no edge found' % filename)
    return edges


def _load_edge_input(filename, force=False):
    name = os.path.splitext(os.path.basename(filename))[0]
    return load_graph(load_edge_list(filename), name=name)


def write_edge_list(filename, space, graph=None, manifest=None):
    """Writes the edges of a graph by vertex index, preceded by the manifest as comments"""
    if graph is None:
        raise FormatError('%s: edge lists are written for graphs only, %s has no graph' % (filename, space.name))
    with open(filename, 'w') as f:
        f.write('# roundlab edge list of %s\n' % graph.name)
        if manifest is not None:
            f.write('\n'.join(manifest.comment_lines()) + '\n')
        for (u, v) in graph.edges:
            f.write('%u %u\n' % (u, v))


# =======================================================================
# CERTIFICATES, RESULTS AND EMBEDDINGS
# =======================================================================

def write_certificate(filename, certificate, space=None, manifest=None, **extra):
    """Writes a violation certificate (None when no violation was found) or a negative type certificate.

    Extra keyword arguments are stored as additional JSON entries.
    """
    labels = None if space is None else space.labels
    if isinstance(certificate, NegTypeCertificate):
        doc = {'kind': 'negative_type_certificate', 'certificate': certificate.as_dict()}
    elif certificate is None:
        doc = {'kind': 'violation_certificate', 'found': False, 'certificate': None}
    else:
        doc = {'kind': 'violation_certificate', 'found': True, 'certificate': certificate.as_dict(labels)}
    if space is not None:
        doc['space'] = space.name
    doc.update(extra)
    write_json(filename, doc, manifest)


def load_certificate(filename):
    """Returns the ViolationCertificate (or None) or NegTypeCertificate stored in a file"""
    doc = load_json(filename)
    kind = doc.get('kind')
    if kind == 'negative_type_certificate':
        return NegTypeCertificate.from_dict(doc['certificate'])
    if kind == 'violation_certificate':
        if doc['certificate'] is None:
            return None
        return ViolationCertificate.from_dict(doc['certificate'])
    raise FormatError('%s: "%s" is not a certificate kind' % (filename, kind))


def write_result(filename, space, result, manifest=None):
    """Writes the roundness of a space with its bracketing certificates. The run time goes to the manifest."""
    doc = {'kind': 'roundness',
           'space': space.name,
           'n_points': space.nb_points,
           'result': result.as_dict()}
    write_json(filename, doc, manifest)


def load_result(filename):
    """Returns the PStarResult stored in a roundness file"""
    return PStarResult.from_dict(load_json(filename, kind='roundness')['result'])


def write_embedding(filename, embedding, labels=None, hps=None, graph=None, manifest=None):
    """Writes an l1 (hyperplane) embedding or a Euclidean (GNS) configuration as JSON.

    Point labels are stored for Euclidean configurations when given. For l1 embeddings, the edges of each class are
    stored by vertex label when hps and graph are given.
    """
    if isinstance(embedding, EuclideanConfiguration):
        doc = {'kind': 'gns_embedding'}
        doc.update(embedding.as_dict())
        if labels is not None:
            doc['labels'] = list(labels)
    else:
        doc = {'kind': 'l1_embedding'}
        doc.update(embedding.as_dict())
        if hps is not None and graph is not None:
            labels = graph.labels
            doc['class_edges'] = [[[labels[u], labels[v]] for (u, v) in edges] for edges in hps.classes]
    write_json(filename, doc, manifest)


def load_embedding(filename):
    """Returns the L1Embedding or EuclideanConfiguration stored in a file"""
    doc = load_json(filename)
    kind = doc.get('kind')
    if kind == 'l1_embedding':
        return L1Embedding.from_dict(doc)
    if kind == 'gns_embedding':
        return EuclideanConfiguration.from_dict(doc)
    raise FormatError('%s: "%s" is not an embedding kind' % (filename, kind))


# =======================================================================
# CSV TABLES
# =======================================================================

def _format_cell(value):
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(filename, rows, manifest=None):
    """Writes roundness rows with the columns of CSV_COLUMNS.

    Parameters
    ----------
    rows : list of dict
        One dict per space, keyed by column name
    manifest : RunManifest, optional
        Written as leading '#' lines
    """
    with open(filename, 'w', newline='') as f:
        if manifest is not None:
            f.write('\n'.join(manifest.comment_lines()) + '\n')
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow([_format_cell(row[column]) for column in CSV_COLUMNS])


def load_csv(filename):
    """Reads a table written by write_csv.

    Returns
    -------
    rows : list of dict
        Typed values keyed by column name
    manifest : RunManifest or None
    """
    _check_file(filename)
    header = dict()
    lines = []
    with open(filename, 'r', newline='') as f:
        for (lineno, line) in enumerate(f, start=1):
            if line.startswith('#'):
                key, sep, value = line[1:].partition(':')
                if not sep:
                    raise FormatError('%s:%u: malformed manifest line' % (filename, lineno))
                try:
                    header[key.strip()] = json.loads(value)
                except json.JSONDecodeError as err:
                    raise FormatError('%s:%u: %s' % (filename, lineno, err.msg))
            else:
                lines.append((lineno, line))

    reader = csv.reader([line for (_, line) in lines])
    rows = []
    columns = None
    for ((lineno, _), record) in zip(lines, reader):
        if columns is None:
            columns = tuple(record)
            if columns != CSV_COLUMNS:
                raise FormatError('%s:%u: expected columns %s' % (filename, lineno, ','.join(CSV_COLUMNS)))
            continue
        if len(record) != len(columns):
            raise FormatError('%s:%u: expected %u fields, got %u' % (filename, lineno, len(columns), len(record)))
        try:
            rows.append(dict((column, _CSV_TYPES[column](value)) for (column, value) in zip(columns, record)))
        except ValueError as err:
            raise FormatError('%s:%u: %s' % (filename, lineno, err))

    manifest = RunManifest.from_dict(header) if 'command' in header else None
    return rows, manifest


# =======================================================================
# VTK EXPORT
# =======================================================================

def _build_vtkPolyData(points, edges):
    """Builds a vtkPolyData with one vertex cell per point and one line per edge"""

    import vtk

    vtk_points = vtk.vtkPoints()
    for point in points:
        vtk_points.InsertNextPoint(point)

    vertices = vtk.vtkCellArray()
    for i in range(len(points)):
        vertices.InsertNextCell(1)
        vertices.InsertCellPoint(i)

    lines = vtk.vtkCellArray()
    for (u, v) in edges:
        line = vtk.vtkLine()
        line.GetPointIds().SetId(0, u)
        line.GetPointIds().SetId(1, v)
        lines.InsertNextCell(line)

    polydata = vtk.vtkPolyData()
    polydata.SetPoints(vtk_points)
    polydata.SetVerts(vertices)
    polydata.SetLines(lines)
    return polydata


def write_vtp(filename, points, edges=(), manifest=None):
    """Writes points, and the edges between them, as .vtp polydata for Paraview.

    It relies on the VTK library for its writer. Configurations of dimension lower than 3 are padded with zeros,
    higher dimensions are projected on their first three coordinates.

    Parameters
    ----------
    filename : str
    points : ndarray
        (n x dim) coordinates
    edges : list of (int, int), optional
    manifest : RunManifest, optional
        Stored as JSON in a "manifest" string array of the field data
    """
    points = np.asarray(points, dtype=float)
    dim = points.shape[1]
    if dim > 3:
        warnings.warn('Only the first 3 of %u coordinates are written to %s' % (dim, filename))
        coords = points[:, :3]
    else:
        coords = np.zeros((points.shape[0], 3))
        coords[:, :dim] = points

    from vtk import vtkXMLPolyDataWriter
    writer = vtkXMLPolyDataWriter()
    writer.SetDataModeToAscii()
    writer.SetFileName(filename)
    polydata = _build_vtkPolyData(coords, edges)
    if manifest is not None:
        from vtk import vtkStringArray
        field = vtkStringArray()
        field.SetName('manifest')
        field.InsertNextValue(json.dumps(manifest.as_dict(), sort_keys=True))
        polydata.GetFieldData().AddArray(field)
    writer.SetInputData(polydata)
    writer.Write()


def load_vtp_manifest(filename):
    """Returns the RunManifest stored in a .vtp file, None if it has none"""
    _check_file(filename)

    from vtk import vtkXMLPolyDataReader
    reader = vtkXMLPolyDataReader()
    reader.SetFileName(filename)
    reader.Update()

    field = reader.GetOutput().GetFieldData().GetAbstractArray('manifest')
    if field is None:
        return None
    return RunManifest.from_dict(json.loads(field.GetValue(0)))


# =======================================================================
# DRIVERS
# =======================================================================

def load_input(filename, file_format=None, force=False):
    """Driver function that loads a space file or an edge list.

    Parameters
    ----------
    filename : str
    file_format : str, optional
        Key of extension_dict. Default is the file extension.
    force : bool, optional

    Returns
    -------
    graph : Graph or None
        None for JSON spaces without edges
    space : FiniteMetricSpace
    """
    _check_file(filename)
    if file_format is None:
        file_format = os.path.splitext(filename)[1][1:].lower()
    if file_format not in extension_dict:
        raise IOError('Extension ".%s" is not known' % file_format)
    loader = extension_dict[file_format][0]
    return loader(filename, force=force)


def write_output(filename, space, graph=None, manifest=None, file_format=None):
    """Driver function that writes a space as JSON or a graph as an edge list, according to the extension"""
    if file_format is None:
        file_format = os.path.splitext(filename)[1][1:].lower()
    if file_format not in extension_dict:
        raise IOError('Extension ".%s" is not known' % file_format)
    writer = extension_dict[file_format][1]
    writer(filename, space, graph, manifest)


def know_extension(ext):
    return ext in extension_dict


extension_dict = {  # keyword,  reader,   writer
    'json': (_load_json_input, write_space),
    'txt': (_load_edge_input, write_edge_list),
    'edges': (_load_edge_input, write_edge_list),
    'el': (_load_edge_input, write_edge_list),
}
