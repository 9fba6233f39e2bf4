"""Sampling-based mining of frequent, confident categorical feature
interactions from chains of intersected records."""

from .chain import Chain, ChainSet, generate_chain, generate_chains, survival_depth
from .dataset import ClassPrior, EncodedDataset, bin_numeric, from_records, ingest_csv, sample_row
from .estimator import confidence, frequency
from .miner import MinerConfig, PlannerInputs, ScoredRule, mine, mine_naive, mine_queue, plan_parameters
from .pattern import Pattern, intersect, is_subset, union_disjoint
from .pqueue import BoundedMaxQueue
from .subset_select import FrequencyCache, insert_freq_subsets, top_frequent_closure

__version__ = "0.1.0"
