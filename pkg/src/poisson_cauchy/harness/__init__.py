"""Corpus, convergence sweeps, identity audit and report writers."""

from .audit import AuditReport, audit_identities
from .convergence import ConvergenceReport, HarnessConfig, fit_slope, run_convergence, xi_grid
from .corpus import CorpusEntry, builtin_corpus, corpus_by_name
