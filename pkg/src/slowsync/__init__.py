"""Slowly synchronizing DFAs: search, bounds, classification and constructions."""
from .bounds import (BoundsReport, CapacityError, FranklPinInstance, bound_L, bound_Lp,
                     bound_Lpp, bounds_report, frankl_pin_exact, frankl_pin_greedy)
from .classify import (alphabet_ranges, classify, extract_maximal, is_maximal, is_minimal,
                       is_semi_minimal, maximal_supersets, nontransitive_max_length, range_table,
                       saturate, semi_minimal_dfas, subset_achievers)
from .constructions import (cerny, construct, maximum_3n5, merge_chain, nontransitive_extremal,
                            nontransitive_f, star_interchange, star_semi_minimal)
from .core import (Dfa, DfaError, ParseError, canonical_form, format_dfa, jt_scan, jt_table,
                   parse_dfa)
from .power import (PowerGraph, irreducible_scc, is_synchronizing, is_transitive,
                    max_subset_sync_length, reduction_data, shortest_sync_word,
                    subset_sync_length, sync_length)
from .search import CountTable, SearchConfig, SearchRecord, count, enumerate_all, enumerate_dfas

__all__ = [
    "BoundsReport", "CapacityError", "FranklPinInstance", "bound_L", "bound_Lp", "bound_Lpp",
    "bounds_report", "frankl_pin_exact", "frankl_pin_greedy",
    "alphabet_ranges", "classify", "extract_maximal", "is_maximal", "is_minimal",
    "is_semi_minimal", "maximal_supersets", "nontransitive_max_length", "range_table",
    "saturate", "semi_minimal_dfas", "subset_achievers",
    "cerny", "construct", "maximum_3n5", "merge_chain", "nontransitive_extremal",
    "nontransitive_f", "star_interchange", "star_semi_minimal",
    "Dfa", "DfaError", "ParseError", "canonical_form", "format_dfa", "jt_scan", "jt_table",
    "parse_dfa",
    "PowerGraph", "irreducible_scc", "is_synchronizing", "is_transitive",
    "max_subset_sync_length", "reduction_data", "shortest_sync_word", "subset_sync_length",
    "sync_length",
    "CountTable", "SearchConfig", "SearchRecord", "count", "enumerate_all", "enumerate_dfas",
]
