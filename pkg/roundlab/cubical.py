#!/usr/bin/env python
#  -*- coding: utf-8 -*-
"""This module realizes the hyperplane embedding of the 0-skeleton of a CAT(0) cube complex into l1.

The complex is modeled by its 1-skeleton, a median graph. Hyperplanes are the Djokovic-Winkler classes of edges:
two edges are related when they are opposite sides of a 4-cycle, and classes are the transitive closure of this
relation. Deleting the edges of a class leaves exactly two components, the half-spaces. Fixing a basepoint v0, each
vertex v is sent to the indicator vector of the hyperplanes separating v0 and v; the l1 distance between two such
vectors is the number of hyperplanes separating the vertices, which is their graph distance.

Graphs that are not cube complex skeletons are rejected with the offending class rather than producing a
non-isometric embedding.
"""

from itertools import combinations

import numpy as np
import networkx as nx
from networkx.utils import UnionFind

from .metric import FiniteMetricSpace
from .generators import coord_label, l1_ball_points
from .exceptions import DomainError, StructuralError, NotCubicalError

__author__ = "roundlab developers"
__licence__ = "GPLv3"
__status__ = "Development"

# Number of random shortest paths checked for crossing each class at most once
DEFAULT_SPOT_CHECKS = 32

# Failing pairs kept in an isometry report
MAX_REPORTED_FAILURES = 100


class HyperplaneSet(object):
    """Partition of the edges of a graph into hyperplanes, with their half-spaces.

    Parameters
    ----------
    classes : list of list of (int, int)
        Edges of each class
    sides : ndarray
        (nb_vertices x nb_classes) array; sides[v][h] is 0 when v lies in the half-space of h containing vertex 0,
        1 otherwise
    """
    def __init__(self, classes, sides):
        self.classes = [list(edges) for edges in classes]
        self.sides = np.asarray(sides, dtype=np.int8)
        self.sides.flags.writeable = False
        self._edge_class = dict()
        for (h, edges) in enumerate(self.classes):
            for edge in edges:
                self._edge_class[edge] = h

    def __str__(self):
        return 'HyperplaneSet{%u vertices, %u classes, sizes %s}' % (self.nb_vertices, self.nb_classes,
                                                                    [len(edges) for edges in self.classes])

    @property
    def nb_classes(self):
        return len(self.classes)

    @property
    def nb_vertices(self):
        return self.sides.shape[0]

    def class_of_edge(self, u, v):
        """Index of the class containing edge (u, v)"""
        try:
            return self._edge_class[(min(u, v), max(u, v))]
        except KeyError:
            raise DomainError('(%d, %d) is not an edge' % (u, v))

    def halfspaces(self, h):
        """Returns the two vertex sets (side of vertex 0, other side) of class h"""
        side = self.sides[:, h]
        return frozenset(np.nonzero(side == 0)[0].tolist()), frozenset(np.nonzero(side == 1)[0].tolist())

    def separates(self, h, v, w):
        return bool(self.sides[v, h] != self.sides[w, h])


def _squares(nxg):
    """Yields the 4-cycles (u, v, x, w) by intersection of neighborhoods"""
    for u in sorted(nxg.nodes()):
        for v, w in combinations(sorted(nxg.neighbors(u)), 2):
            common = (set(nxg.neighbors(v)) & set(nxg.neighbors(w))) - {u}
            for x in sorted(common):
                yield u, v, x, w


def spot_check_convexity(graph, hps, samples=DEFAULT_SPOT_CHECKS, seed=0):
    """Checks that sampled shortest paths cross every class at most once.

    Returns
    -------
    tuple or None
        (v, w, class) for the first path crossing a class twice, None if every sampled path is fine
    """
    n = graph.nb_vertices
    if n < 2:
        return None
    rng = np.random.default_rng(seed)
    nxg = graph.nx_graph
    for _ in range(int(samples)):
        v, w = (int(x) for x in rng.choice(n, size=2, replace=False))
        crossed = set()
        vertices = nx.shortest_path(nxg, v, w)
        for (x, y) in zip(vertices[:-1], vertices[1:]):
            h = hps.class_of_edge(x, y)
            if h in crossed:
                return v, w, h
            crossed.add(h)
    return None


def theta_classes(graph, spot_checks=DEFAULT_SPOT_CHECKS, seed=0, verbose=False):
    """Computes the hyperplanes (Djokovic-Winkler classes) of a median graph and their half-spaces.

    Parameters
    ----------
    graph : Graph
        Connected bipartite graph, intended to be a median graph
    spot_checks : int, optional
        Number of random shortest paths checked for crossing each class at most once
    seed : int, optional
        Seed of the spot checks
    verbose : bool, optional

    Returns
    -------
    HyperplaneSet

    Raises
    ------
    NotCubicalError
        If deleting a class does not split the graph into exactly two components crossed by every edge of the
        class, or if a shortest path crosses a class twice
    """
    nxg = graph.nx_graph
    edges = graph.edges
    edge_ids = dict((edge, i) for (i, edge) in enumerate(edges))

    def edge_id(u, v):
        return edge_ids[(min(u, v), max(u, v))]

    if verbose:
        print('* Computing the edge classes of %s...' % graph.name)

    union_find = UnionFind(range(len(edges)))
    for (u, v, x, w) in _squares(nxg):
        union_find.union(edge_id(u, v), edge_id(w, x))
        union_find.union(edge_id(u, w), edge_id(v, x))

    groups = sorted(sorted(group) for group in union_find.to_sets())
    classes = [[edges[i] for i in group] for group in groups]

    n = graph.nb_vertices
    sides = np.zeros((n, len(classes)), dtype=np.int8)
    for (h, class_edges) in enumerate(classes):
        components = list(nx.connected_components(nx.restricted_view(nxg, [], class_edges)))
        if len(components) != 2:
            u, v = class_edges[0]
            raise NotCubicalError('Not a cubical skeleton: class %u of edge (%s, %s) leaves %u component(s)'
                                  % (h, graph.labels[u], graph.labels[v], len(components)), h)
        other = components[1] if 0 in components[0] else components[0]
        sides[list(other), h] = 1
        for (u, v) in class_edges:
            if sides[u, h] == sides[v, h]:
                raise NotCubicalError('Not a cubical skeleton: edge (%s, %s) of class %u does not cross it'
                                      % (graph.labels[u], graph.labels[v], h), h)

    hps = HyperplaneSet(classes, sides)

    failure = spot_check_convexity(graph, hps, spot_checks, seed)
    if failure is not None:
        v, w, h = failure
        raise NotCubicalError('Not a cubical skeleton: a shortest path from %s to %s crosses class %u twice'
                              % (graph.labels[v], graph.labels[w], h), h)

    if verbose:
        print('\t--> %u classes found' % hps.nb_classes)
    return hps


def separation_count(hps, v, w):
    """Number of hyperplanes separating vertices v and w"""
    n = hps.nb_vertices
    for x in (v, w):
        if x < 0 or x >= n:
            raise DomainError('Vertex %d is out of range [0, %u[' % (x, n))
    return int(np.count_nonzero(hps.sides[v] != hps.sides[w]))


class L1Embedding(object):
    """Indicator vectors of the hyperplanes separating each vertex from the basepoint.

    Parameters
    ----------
    basepoint : int
        Index of v0
    vectors : ndarray
        (nb_vertices x nb_classes) 0/1 integer array
    labels : list of str, optional
        Vertex labels
    """
    def __init__(self, basepoint, vectors, labels=None):
        self.basepoint = int(basepoint)
        self.vectors = np.asarray(vectors, dtype=np.int64)
        if labels is None:
            labels = [str(i) for i in range(self.vectors.shape[0])]
        self.labels = tuple(labels)

    @property
    def nb_vertices(self):
        return self.vectors.shape[0]

    @property
    def dimension(self):
        return self.vectors.shape[1]

    def as_dict(self):
        return {'basepoint': self.basepoint,
                'dimension': self.dimension,
                'classes': list(range(self.dimension)),
                'labels': list(self.labels),
                'vectors': [np.nonzero(vector)[0].tolist() for vector in self.vectors]}

    @classmethod
    def from_dict(cls, data):
        vectors = np.zeros((len(data['vectors']), int(data['dimension'])), dtype=np.int64)
        for (v, support) in enumerate(data['vectors']):
            vectors[v, support] = 1
        return cls(data['basepoint'], vectors, data.get('labels'))


def halfspace_embedding(graph, hps, basepoint=0):
    """Sends each vertex v to the sum of the delta_h over the hyperplanes h separating the basepoint and v.

    Returns
    -------
    L1Embedding
    """
    basepoint = int(basepoint)
    if hps.nb_vertices != graph.nb_vertices:
        raise StructuralError('Hyperplane set has %u vertices, graph has %u' % (hps.nb_vertices, graph.nb_vertices))
    if basepoint < 0 or basepoint >= graph.nb_vertices:
        raise DomainError('Basepoint %d is out of range [0, %u[' % (basepoint, graph.nb_vertices))
    vectors = (hps.sides != hps.sides[basepoint]).astype(np.int64)
    return L1Embedding(basepoint, vectors, graph.labels)


def embedding_to_space(emb):
    """l1 metric between the embedding vectors"""
    vectors = emb.vectors
    dist = np.array([np.abs(vectors - vector).sum(axis=1) for vector in vectors], dtype=np.int64)
    return FiniteMetricSpace(dist.reshape(emb.nb_vertices, emb.nb_vertices), labels=emb.labels, force=True)


class IsometryReport(object):
    """Outcome of verify_isometry.

    Parameters
    ----------
    nb_pairs : int
        Number of vertex pairs checked
    failures : list of (int, int, int, float)
        (v, w, l1 distance, metric distance) for failing pairs
    """
    def __init__(self, nb_pairs, failures, truncated=False):
        self.nb_pairs = int(nb_pairs)
        self.failures = list(failures)
        self.truncated = bool(truncated)

    @property
    def passed(self):
        return len(self.failures) == 0

    def __bool__(self):
        return self.passed

    def __str__(self):
        if self.passed:
            return 'IsometryReport{passed, %u pairs}' % self.nb_pairs
        return 'IsometryReport{FAILED on %u%s of %u pairs, first %s}' % (
            len(self.failures), '+' if self.truncated else '', self.nb_pairs, self.failures[0])

    def as_dict(self):
        return {'passed': self.passed,
                'nb_pairs': self.nb_pairs,
                'truncated': self.truncated,
                'failures': [list(failure) for failure in self.failures]}


def verify_isometry(emb, space):
    """Checks ‖f(v) - f(w)‖_1 = d(v, w) for every pair of vertices, in exact integer arithmetic.

    Returns
    -------
    IsometryReport
    """
    n = space.nb_points
    if emb.nb_vertices != n:
        raise StructuralError('Embedding has %u vertices, space has %u points' % (emb.nb_vertices, n))

    if space.is_integral:
        dist = space.int_dist
    else:
        dist = space.dist
    failures = []
    truncated = False
    for v in range(n):
        l1 = np.abs(emb.vectors[v + 1:] - emb.vectors[v]).sum(axis=1)
        for offset in np.nonzero(l1 != dist[v, v + 1:])[0]:
            w = v + 1 + int(offset)
            if len(failures) < MAX_REPORTED_FAILURES:
                failures.append((v, w, int(l1[offset]), dist[v, w].item()))
            else:
                truncated = True
    return IsometryReport(n * (n - 1) // 2, failures, truncated)


def orbit_metric(orbit_map, space):
    """Pulls back a metric along an orbit map: D(g, h) = d(g v0, h v0).

    Parameters
    ----------
    orbit_map : list of (str, int or str)
        Pairs (group element label, vertex) where the vertex is an index or a label of space
    space : FiniteMetricSpace

    Returns
    -------
    FiniteMetricSpace
        Metric on the group element labels

    Raises
    ------
    DomainError
        If two elements are sent to the same vertex
    """
    elements = []
    vertices = []
    seen = dict()
    for element, vertex in orbit_map:
        if isinstance(vertex, str):
            vertex = space.index(vertex)
        vertex = int(vertex)
        if vertex < 0 or vertex >= space.nb_points:
            raise DomainError('Vertex %d is out of range [0, %u[' % (vertex, space.nb_points))
        if vertex in seen:
            raise DomainError('Orbit map is not injective: %s and %s are both sent to %s'
                              % (seen[vertex], element, space.labels[vertex]))
        seen[vertex] = element
        elements.append(str(element))
        vertices.append(vertex)

    idx = np.asarray(vertices, dtype=int)
    if space.is_integral:
        dist = space.int_dist[np.ix_(idx, idx)]
    else:
        dist = space.dist[np.ix_(idx, idx)]
    return FiniteMetricSpace(dist, labels=elements, name='%s_orbit' % space.name)


def _zn_word(g):
    letters = []
    for (axis, exponent) in enumerate(g):
        if exponent == 0:
            continue
        letter = chr(ord('a') + axis)
        letters.append(letter if exponent == 1 else '%s^%d' % (letter, exponent))
    return '*'.join(letters) if letters else 'e'


def zn_orbit_map(rank, radius, space, basepoint=None):
    """Orbit map of the translation action of Z^rank on a ball of the Z^rank grid.

    Elements g of word length <= radius with g + v0 in the ball are paired with the vertex g + v0.

    Parameters
    ----------
    rank, radius : int
        Parameters of the ball the elements are taken from
    space : FiniteMetricSpace
        A grid or a Z^rank ball whose labels are coordinates
    basepoint : tuple of int, optional
        Coordinates of v0. Default is the origin.

    Returns
    -------
    list of (str, int)
    """
    if basepoint is None:
        basepoint = (0,) * rank
    basepoint = tuple(int(x) for x in basepoint)
    if len(basepoint) != rank:
        raise DomainError('Basepoint %s does not have rank %u' % (basepoint, rank))
    orbit_map = []
    for g in sorted(l1_ball_points(rank, radius)):
        label = coord_label(tuple(x + y for (x, y) in zip(g, basepoint)))
        try:
            orbit_map.append((_zn_word(g), space.index(label)))
        except DomainError:
            continue
    return orbit_map
