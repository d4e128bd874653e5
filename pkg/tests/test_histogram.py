import math

import numpy as np
import pytest

from texthist.clustering import Cluster
from texthist.corpus import Corpus
from texthist.extraction import extract_entities, tokenize
from texthist.histogram import (
    AUTO,
    SORT_ENTROPY,
    SORT_TOTAL,
    USER,
    Bucket,
    Histogram,
    HistogramError,
    assemble_histogram,
    auto_histogram_id,
    build_histogram,
    contains_entity,
    select_bucket,
    shannon_entropy,
    sort_histograms,
)
from texthist.labeling import LabeledCluster


def hist(label, counts, hist_id=None, source=AUTO):
    buckets = tuple(
        Bucket(i, (f"term{i:02d}",), c)
        for i, c in enumerate(sorted(counts, reverse=True))
    )
    return Histogram(
        id=hist_id or auto_histogram_id(label, [b.surface_text for b in buckets]),
        label=label,
        buckets=buckets,
        source=source,
        total_count=sum(counts),
        entropy=shannon_entropy(list(counts)),
    )


class TestContainsEntity:
    def test_direct_membership(self):
        assert contains_entity(tokenize("cancer risk rises"), ("cancer",))

    def test_no_substring_match_inside_token(self):
        assert not contains_entity(tokenize("cancerous cells"), ("cancer",))

    def test_contiguous_bigram(self):
        assert contains_entity(tokenize("covid 19 vaccine"), ("covid", "19"))

    def test_non_contiguous_bigram_fails(self):
        assert not contains_entity(tokenize("covid vaccine 19"), ("covid", "19"))

    def test_case_insensitive_by_construction(self):
        assert contains_entity(tokenize("Cancer Risk"), ("cancer",))

    def test_empty_surface_rejected(self):
        with pytest.raises(ValueError):
            contains_entity(tokenize("x"), ())


class TestBuildHistogram:
    def make(self):
        corpus = Corpus(["cancer cancer", "cancer flu"])
        table = extract_entities(corpus, k_cap=10)
        return corpus, table

    def test_hand_counts(self):
        corpus, table = self.make()
        cluster = Cluster(tuple(sorted(e.id for e in table)), 0.5)
        labeled = LabeledCluster(cluster, "diseases", ("cancer", "flu"))
        histogram = build_histogram(labeled, table, corpus)
        assert [(b.surface_text, b.count) for b in histogram.buckets] == [
            ("cancer", 2),
            ("flu", 1),
        ]
        assert histogram.total_count == 3
        assert histogram.source == AUTO

    def test_single_bucket_entropy_zero(self):
        assert hist("one", [5]).entropy == 0.0

    def test_two_equal_buckets_entropy_ln2(self):
        assert hist("two", [3, 3]).entropy == pytest.approx(math.log(2))

    def test_buckets_sorted_count_desc_surface_asc(self, fixture_corpus, fixture_artifact):
        for histogram in fixture_artifact.auto_histograms:
            keys = [(-b.count, b.surface) for b in histogram.buckets]
            assert keys == sorted(keys)

    def test_entropy_bounds(self, fixture_artifact):
        for histogram in fixture_artifact.auto_histograms:
            assert -1e-9 <= histogram.entropy <= math.log(len(histogram.buckets)) + 1e-9

    def test_content_derived_id_stable(self):
        assert auto_histogram_id("x", ["b", "a"]) == auto_histogram_id("x", ["a", "b"])
        assert auto_histogram_id("x", ["a"]) != auto_histogram_id("y", ["a"])

    def test_all_empty_is_error(self):
        corpus, table = self.make()
        with pytest.raises(HistogramError, match="no non-empty buckets"):
            assemble_histogram("empty", [], corpus)


class TestSortHistograms:
    def test_total_with_label_ties(self):
        hists = [hist("c", [5]), hist("a", [9]), hist("b", [9])]
        ordered = sort_histograms(hists, SORT_TOTAL)
        assert [h.label for h in ordered] == ["a", "b", "c"]

    def test_entropy_prefers_uniform(self):
        spike = hist("spike", [17, 1, 1, 1])
        uniform = hist("uniform", [5, 5, 5, 5])
        ordered = sort_histograms([spike, uniform], SORT_ENTROPY)
        assert [h.label for h in ordered] == ["uniform", "spike"]

    def test_empty(self):
        assert sort_histograms([], SORT_TOTAL) == []

    def test_permutation_preserved(self):
        rng = np.random.default_rng(13)
        hists = [hist(f"label{i}", list(rng.integers(1, 20, size=3))) for i in range(20)]
        for key in (SORT_TOTAL, SORT_ENTROPY):
            ordered = sort_histograms(hists, key)
            assert sorted(h.id for h in ordered) == sorted(h.id for h in hists)

    def test_unknown_key(self):
        with pytest.raises(ValueError):
            sort_histograms([], "banana")


class TestSelectBucket:
    def make(self):
        corpus = Corpus(["cancer cancer", "cancer flu", "nothing here"])
        table = extract_entities(corpus, k_cap=10)
        cluster = Cluster(tuple(sorted(e.id for e in table)), 0.5)
        labeled = LabeledCluster(cluster, "all", ())
        return corpus, table, build_histogram(labeled, table, corpus)

    def test_returns_posting_list(self):
        corpus, table, histogram = self.make()
        cancer_id = table.find(("cancer",)).id
        assert select_bucket(histogram, cancer_id, table) == [0, 1]

    def test_length_equals_count(self):
        corpus, table, histogram = self.make()
        for bucket in histogram.buckets:
            assert len(select_bucket(histogram, bucket.entity_id, table)) == bucket.count

    def test_unknown_entity(self):
        corpus, table, histogram = self.make()
        with pytest.raises(KeyError):
            select_bucket(histogram, 999, table)

    def test_selection_matches_containment_scan(self):
        corpus, table, histogram = self.make()
        for bucket in histogram.buckets:
            selected = select_bucket(histogram, bucket.entity_id, table)
            scanned = [
                ex.id
                for ex in corpus.examples
                if contains_entity(tokenize(ex.text), bucket.surface)
            ]
            assert selected == scanned


class TestCountOracle:
    def test_fixture_bucket_counts_match_scan(self, fixture_corpus, fixture_artifact):
        """Every bucket equals a brute-force containment count."""
        tokenized = [tokenize(ex.text) for ex in fixture_corpus.examples]
        for histogram in fixture_artifact.auto_histograms[:5]:
            for bucket in histogram.buckets:
                scan = sum(1 for toks in tokenized if contains_entity(toks, bucket.surface))
                assert bucket.count == scan
