from .constraint import ResolvedScenario, ScenarioConstraint, parse_scenario, resolve
from .corpus import iter_corpus, read_corpus, read_corpus_meta, write_corpus
from .generate import count_scenario, enumerate_scenario, fuzz_timing, sample_random

__all__ = [
    "ResolvedScenario",
    "ScenarioConstraint",
    "count_scenario",
    "enumerate_scenario",
    "fuzz_timing",
    "iter_corpus",
    "parse_scenario",
    "read_corpus",
    "read_corpus_meta",
    "resolve",
    "sample_random",
    "write_corpus",
]
