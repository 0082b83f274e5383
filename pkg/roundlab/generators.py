#!/usr/bin/env python
#  -*- coding: utf-8 -*-
"""This module builds the example spaces: word metric balls of Z^n and of free groups, hypercubes, grids, cycles,
paths, complete graphs and finite samples of L^p spaces.

Graph builders return a (Graph, FiniteMetricSpace) pair, the metric being the shortest path metric of the graph.
Balls keep only their within-ball edges; for Z^n balls and free group balls the graph metric of the truncated graph
equals the ambient word metric, which is asserted at construction.
"""

import itertools
from math import comb, prod

import numpy as np
import networkx as nx
from scipy.sparse.csgraph import shortest_path
from scipy.spatial.distance import pdist, squareform, cdist

from .metric import FiniteMetricSpace
from .exceptions import DomainError, SizeCapError, InconsistencyError

__author__ = "roundlab developers"
__licence__ = "GPLv3"
__status__ = "Development"

# Largest number of vertices a generator accepts
MAX_VERTICES = 10 ** 5

MAX_HYPERCUBE_DIM = 12

# Brute force median check is cubic in the number of vertices
MAX_MEDIAN_CHECK_VERTICES = 500

FAMILIES = ('zn', 'free', 'hypercube', 'grid', 'cycle', 'path', 'lp', 'equilateral')


def coord_label(coords):
    """Label of a lattice point, for instance (1, -2)"""
    return '(%s)' % ', '.join(str(int(x)) for x in coords)


class Graph(object):
    """A connected simple undirected graph on vertices 0..n-1.

    It wraps a networkx.Graph.

    Parameters
    ----------
    edges : list of (int, int)
        Edges given by vertex indices
    labels : list of str, optional
        Vertex labels. Default is the vertex indices as strings.
    nb_vertices : int, optional
        Number of vertices. Default is the number of labels, or the largest index in edges plus one.
    name : str, optional

    Raises
    ------
    DomainError
        On self-loops, repeated edges, out of range indices, or if the graph is not connected
    """
    def __init__(self, edges, labels=None, nb_vertices=None, name=None):

        self.__internals__ = dict()

        edges = [(int(u), int(v)) for (u, v) in edges]
        if nb_vertices is None:
            if labels is not None:
                nb_vertices = len(labels)
            elif edges:
                nb_vertices = max(max(u, v) for (u, v) in edges) + 1
            else:
                nb_vertices = 1
        nb_vertices = int(nb_vertices)
        if nb_vertices < 1:
            raise DomainError('A graph needs at least one vertex')

        if labels is None:
            labels = [str(i) for i in range(nb_vertices)]
        labels = tuple(str(label) for label in labels)
        if len(labels) != nb_vertices:
            raise DomainError('%u labels given for %u vertices' % (len(labels), nb_vertices))

        nxg = nx.Graph()
        nxg.add_nodes_from(range(nb_vertices))
        for (u, v) in edges:
            if u < 0 or v < 0 or u >= nb_vertices or v >= nb_vertices:
                raise DomainError('Edge (%d, %d) has a vertex out of range [0, %u[' % (u, v, nb_vertices))
            if u == v:
                raise DomainError('Self-loop on vertex %s' % labels[u])
            if nxg.has_edge(u, v):
                raise DomainError('Repeated edge (%s, %s)' % (labels[u], labels[v]))
            nxg.add_edge(u, v)

        if not nx.is_connected(nxg):
            components = sorted((sorted(c) for c in nx.connected_components(nxg)), key=lambda c: c[0])
            raise DomainError('Graph is not connected: vertices %s and %s are separated'
                              % (labels[components[0][0]], labels[components[1][0]]))

        self._nxg = nxg
        self._labels = labels
        self._name = str(name) if name else 'graph'

    def __str__(self):
        str_repr = """
        --------------------------------------------
        \tGRAPH NAME : %s
        --------------------------------------------

        Number of vertices: %u
        Number of edges:    %u
        """ % (self._name, self.nb_vertices, self.nb_edges)
        return str_repr

    @property
    def name(self):
        return self._name

    @property
    def labels(self):
        return self._labels

    @property
    def nx_graph(self):
        """The underlying networkx graph. It must not be modified."""
        return self._nxg

    @property
    def nb_vertices(self):
        return self._nxg.number_of_nodes()

    @property
    def nb_edges(self):
        return self._nxg.number_of_edges()

    @property
    def edges(self):
        """Sorted list of edges (u, v) with u < v"""
        if 'edges' not in self.__internals__:
            self.__internals__['edges'] = sorted((min(u, v), max(u, v)) for (u, v) in self._nxg.edges())
        return self.__internals__['edges']

    def neighbors(self, vertex):
        return sorted(self._nxg.neighbors(vertex))

    def is_tree(self):
        return nx.is_tree(self._nxg)

    def is_bipartite(self):
        return nx.is_bipartite(self._nxg)

    def metric(self):
        """Returns the shortest path metric as a FiniteMetricSpace with exact integer distances"""
        if 'metric' not in self.__internals__:
            adjacency = nx.to_scipy_sparse_array(self._nxg, nodelist=range(self.nb_vertices), format='csr')
            dist = shortest_path(adjacency, directed=False, unweighted=True)
            self.__internals__['metric'] = FiniteMetricSpace(np.rint(dist).astype(np.int64), labels=self._labels,
                                                             name=self._name)
        return self.__internals__['metric']


def _check_size(nb_vertices, what):
    if nb_vertices > MAX_VERTICES:
        raise SizeCapError('%s would have %u vertices, cap is %u' % (what, nb_vertices, MAX_VERTICES))


def _assert_l1(space, coords):
    """Asserts the graph metric equals the l1 distance between coordinates"""
    l1 = np.rint(cdist(coords, coords, 'cityblock')).astype(np.int64)
    if not np.array_equal(l1, space.int_dist):
        raise InconsistencyError('Graph metric of %s differs from the l1 distance' % space.name)


def _lattice_graph(coords, name):
    index = dict((v, i) for (i, v) in enumerate(coords))
    rank = len(coords[0]) if coords else 0
    edges = []
    for (i, v) in enumerate(coords):
        for axis in range(rank):
            w = v[:axis] + (v[axis] + 1,) + v[axis + 1:]
            j = index.get(w)
            if j is not None:
                edges.append((i, j))
    graph = Graph(edges, labels=[coord_label(v) for v in coords], name=name)
    space = graph.metric()
    _assert_l1(space, np.array(coords, dtype=float))
    return graph, space


def zn_ball_size(rank, radius):
    """Number of points of Z^rank with l1 norm <= radius"""
    return sum(2 ** k * comb(rank, k) * comb(radius, k) for k in range(min(rank, radius) + 1))


def l1_ball_points(rank, radius):
    """Integer points of Z^rank at l1 norm at most radius"""
    if rank == 0:
        return [()]
    points = []
    for x in range(-radius, radius + 1):
        for rest in l1_ball_points(rank - 1, radius - abs(x)):
            points.append((x,) + rest)
    return points


def zn_ball(rank, radius):
    """Ball of radius `radius` around 0 in Z^rank with the word metric of the canonical basis.

    Returns
    -------
    graph : Graph
        Vertices are the lattice points of l1 norm <= radius, labeled by their coordinates
    space : FiniteMetricSpace
        The graph metric, equal to the l1 distance
    """
    rank, radius = int(rank), int(radius)
    if rank < 1 or radius < 1:
        raise DomainError('zn_ball needs rank >= 1 and radius >= 1, got rank=%d, radius=%d' % (rank, radius))
    _check_size(zn_ball_size(rank, radius), 'Z^%u ball of radius %u' % (rank, radius))
    return _lattice_graph(sorted(l1_ball_points(rank, radius)), 'zn_r%u_R%u' % (rank, radius))


def free_group_ball_size(rank, radius):
    """Number of reduced words of length <= radius over rank free generators"""
    return 1 + sum(2 * rank * (2 * rank - 1) ** (k - 1) for k in range(1, radius + 1))


def _word_label(word):
    if not word:
        return 'e'
    return ''.join(chr(ord('a') + g - 1) if g > 0 else chr(ord('A') - g - 1) for g in word)


def free_group_ball(rank, radius):
    """Ball of the Cayley graph of the free group of rank `rank` with respect to a free basis.

    The Cayley graph is the 2*rank regular tree. Generators are written a, b, c... and their inverses A, B, C...;
    the identity is labeled e.

    Returns
    -------
    graph : Graph
        Tree of the reduced words of length <= radius
    space : FiniteMetricSpace
        The tree metric
    """
    rank, radius = int(rank), int(radius)
    if rank < 2 or radius < 1:
        raise DomainError('free_group_ball needs rank >= 2 and radius >= 1, got rank=%d, radius=%d'
                          % (rank, radius))
    if rank > 26:
        raise DomainError('Free groups are limited to 26 generators, got %d' % rank)
    _check_size(free_group_ball_size(rank, radius), 'F_%u ball of radius %u' % (rank, radius))

    letters = []
    for g in range(1, rank + 1):
        letters.extend([g, -g])

    words = [()]
    edges = []
    layer = [0]
    for _ in range(radius):
        next_layer = []
        for parent in layer:
            word = words[parent]
            for letter in letters:
                if word and word[-1] == -letter:
                    continue
                words.append(word + (letter,))
                child = len(words) - 1
                edges.append((parent, child))
                next_layer.append(child)
        layer = next_layer

    graph = Graph(edges, labels=[_word_label(w) for w in words], name='free_r%u_R%u' % (rank, radius))
    if not graph.is_tree():
        raise InconsistencyError('Free group ball is not a tree')
    space = graph.metric()
    depth = np.array([len(w) for w in words])
    if not np.all(space.int_dist[0] == depth):
        raise InconsistencyError('Free group ball metric differs from the word length')
    return graph, space


def grid(dims, name=None):
    """Axis aligned box product of paths, with the l1 metric.

    Parameters
    ----------
    dims : list of int
        Number of vertices along each axis
    name : str, optional
    """
    dims = [int(d) for d in dims]
    if not dims or min(dims) < 1:
        raise DomainError('grid needs a non empty list of positive sizes, got %s' % dims)
    _check_size(prod(dims), 'Grid %s' % dims)
    coords = list(itertools.product(*[range(d) for d in dims]))
    return _lattice_graph(coords, name or 'grid_%s' % 'x'.join(str(d) for d in dims))


def hypercube(n):
    """0-skeleton of the n-cube: vertices {0,1}^n with the Hamming metric"""
    n = int(n)
    if n < 1:
        raise DomainError('Hypercube dimension must be positive, got %d' % n)
    if n > MAX_HYPERCUBE_DIM:
        raise SizeCapError('Hypercube dimension is capped at %u, got %d' % (MAX_HYPERCUBE_DIM, n))
    return grid([2] * n, name='hypercube_%u' % n)


def cycle(n):
    """Cycle graph C_n, n >= 3"""
    n = int(n)
    if n < 3:
        raise DomainError('A cycle needs at least 3 vertices, got %d' % n)
    _check_size(n, 'Cycle')
    graph = Graph([(i, (i + 1) % n) for i in range(n)], name='cycle_%u' % n)
    return graph, graph.metric()


def path(n):
    """Path graph P_n with n >= 2 vertices"""
    n = int(n)
    if n < 2:
        raise DomainError('A path needs at least 2 vertices, got %d' % n)
    _check_size(n, 'Path')
    graph = Graph([(i, i + 1) for i in range(n - 1)], name='path_%u' % n)
    return graph, graph.metric()


def equilateral(n):
    """Complete graph K_n: n points at mutual distance 1"""
    n = int(n)
    if n < 2:
        raise DomainError('An equilateral space needs at least 2 points, got %d' % n)
    _check_size(n, 'Complete graph')
    graph = Graph(list(itertools.combinations(range(n), 2)), nb_vertices=n, name='equilateral_%u' % n)
    return graph, graph.metric()


def lp_sample(dim, count, p, seed=0):
    """Points drawn uniformly in [0, 1]^dim with the p-norm metric, 1 <= p <= 2.

    Points are drawn row after row, so that for a fixed seed the sample of `count` points starts with the sample of
    any smaller count.

    Returns
    -------
    FiniteMetricSpace
    """
    dim, count, p = int(dim), int(count), float(p)
    if dim < 1:
        raise DomainError('Dimension must be positive, got %d' % dim)
    if count < 2:
        raise DomainError('An L^p sample needs at least 2 points, got %d' % count)
    if p < 1. or p > 2.:
        raise DomainError('L^p samples are generated for 1 <= p <= 2, got %g' % p)
    rng = np.random.default_rng(seed)
    coords = rng.random((count, dim))
    dist = squareform(pdist(coords, 'minkowski', p=p))
    return FiniteMetricSpace(dist, name='lp_p%g_d%u_n%u_s%d' % (p, dim, count, seed))


def load_graph(edges, name=None):
    """Builds a graph and its shortest path metric from an edge list.

    Parameters
    ----------
    edges : list of (int, int)
        Edges given by arbitrary integer vertex ids. Vertices are indexed by increasing id and labeled by the id.

    Returns
    -------
    graph : Graph
    space : FiniteMetricSpace
    """
    edges = [(int(u), int(v)) for (u, v) in edges]
    if not edges:
        raise DomainError('Empty edge list')
    ids = sorted(set(itertools.chain.from_iterable(edges)))
    index = dict((vid, i) for (i, vid) in enumerate(ids))
    graph = Graph([(index[u], index[v]) for (u, v) in edges], labels=[str(vid) for vid in ids], name=name)
    return graph, graph.metric()


def graph_from_space(space, name=None):
    """Recovers the graph of a graph metric: its edges are the pairs at distance 1.

    Raises
    ------
    DomainError
        If the space is not the shortest path metric of its distance-1 graph
    """
    if not space.is_integral:
        raise DomainError('%s is not an integer metric, hence not a graph metric' % space.name)
    rows, cols = np.nonzero(np.triu(space.int_dist == 1, k=1))
    graph = Graph(zip(rows, cols), labels=space.labels, name=name or space.name)
    if not np.array_equal(graph.metric().int_dist, space.int_dist):
        raise DomainError('%s is not the shortest path metric of its distance-1 graph' % space.name)
    return graph


def is_median_graph(graph):
    """Tells whether every triple of vertices has exactly one median.

    A median of u, v, w lies on a shortest path between each pair of them. The check is brute force.
    """
    n = graph.nb_vertices
    if n > MAX_MEDIAN_CHECK_VERTICES:
        raise SizeCapError('Median check is limited to %u vertices, got %u' % (MAX_MEDIAN_CHECK_VERTICES, n))
    dist = graph.metric().int_dist
    for u in range(n):
        for v in range(u + 1, n):
            interval = np.nonzero(dist[u] + dist[v] == dist[u, v])[0]
            d_mw = dist[interval, :]
            on_uw = dist[u, interval][:, np.newaxis] + d_mw == dist[u, :][np.newaxis, :]
            on_vw = dist[v, interval][:, np.newaxis] + d_mw == dist[v, :][np.newaxis, :]
            nb_medians = np.sum(on_uw & on_vw, axis=0)
            if np.any(nb_medians != 1):
                return False
    return True


def build_family(family, **kwargs):
    """Driver building any generator family by keyword.

    Parameters
    ----------
    family : str
        One of 'zn', 'free', 'hypercube', 'grid', 'cycle', 'path', 'lp', 'equilateral'
    kwargs
        Family parameters (rank, radius, n, dims, dim, count, p, seed)

    Returns
    -------
    graph : Graph or None
        None for L^p samples
    space : FiniteMetricSpace
    """
    if family == 'zn':
        return zn_ball(kwargs['rank'], kwargs['radius'])
    elif family == 'free':
        return free_group_ball(kwargs['rank'], kwargs['radius'])
    elif family == 'hypercube':
        return hypercube(kwargs['n'])
    elif family == 'grid':
        return grid(kwargs['dims'])
    elif family == 'cycle':
        return cycle(kwargs['n'])
    elif family == 'path':
        return path(kwargs['n'])
    elif family == 'equilateral':
        return equilateral(kwargs['n'])
    elif family == 'lp':
        return None, lp_sample(kwargs['dim'], kwargs['count'], kwargs['p'], kwargs.get('seed', 0))
    raise DomainError('Unknown family %s. Choices are [%s]' % (family, ', '.join(FAMILIES)))
