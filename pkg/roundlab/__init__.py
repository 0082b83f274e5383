#!/usr/bin/env python
#  -*- coding: utf-8 -*-
"""Exact generalized roundness, negative type kernels and hyperplane embeddings of finite metric spaces"""

__version__ = '1.0.0'
