import numpy as np
import pytest

from texthist.corpus import Corpus
from texthist.embedding import (
    EmbeddingCache,
    StubEmbeddingProvider,
    centroid,
    embed_batch,
)
from texthist.extraction import extract_entities
from texthist.histogram import USER
from texthist.labeling import StubGenerator
from texthist.providers import ProviderError
from texthist.query import (
    EXACT,
    SEMANTIC,
    QueryError,
    create_user_histogram,
    exact_search,
    generate_candidate_entities,
    semantic_search,
    suggest_dataset_entities,
)
from tests.test_histogram import hist


@pytest.fixture()
def search_fixture():
    return [
        hist("infectious diseases", [4, 2], hist_id="h-diseases"),
        hist("guitar group", [3], hist_id="h-guitar"),
        hist("diseases group", [2, 2], hist_id="h-disease-grp"),
    ]


class TestExactSearch:
    def test_label_substring(self, search_fixture):
        results = exact_search("disease", search_fixture)
        assert {r.histogram_id for r in results} == {"h-diseases", "h-disease-grp"}
        assert all(r.score == 1.0 and r.match_kind == EXACT for r in results)

    def test_bucket_surface_match(self):
        h = hist("totally opaque label", [2])  # buckets term00...
        assert exact_search("term00", [h]) != []

    def test_no_match(self, search_fixture):
        assert exact_search("zzz", search_fixture) == []

    def test_empty_query(self, search_fixture):
        assert exact_search("", search_fixture) == []
        assert exact_search("   ", search_fixture) == []

    def test_case_insensitive(self, search_fixture):
        assert exact_search("DISEASES", search_fixture) != []

    def test_sorted_by_label(self, search_fixture):
        results = exact_search("diseases", search_fixture)
        assert [r.histogram_id for r in results] == ["h-disease-grp", "h-diseases"]


class TestSemanticSearch:
    def test_exact_match_ranked_first_as_exact(self, search_fixture):
        results = semantic_search(
            "diseases group", search_fixture, StubEmbeddingProvider(), threshold=0.5
        )
        assert results[0].histogram_id == "h-disease-grp"
        assert results[0].match_kind == EXACT

    def test_stub_threshold_filters(self):
        from texthist.embedding import cosine_similarity, stub_embed

        # the underlying cosine facts: only the diseases label clears 0.5
        query_vec = stub_embed("diseases")
        assert cosine_similarity(query_vec, stub_embed("diseases group")) >= 0.5
        assert cosine_similarity(query_vec, stub_embed("guitar group")) < 0.5

        hists = [hist("diseases group", [2], "h-d"), hist("guitar group", [2], "h-g")]
        results = semantic_search("diseases", hists, StubEmbeddingProvider(), threshold=0.5)
        assert {r.histogram_id for r in results} == {"h-d"}

    def test_semantic_kind_without_substring_match(self):
        # a typo query: no substring hit, but the embedding clears threshold
        hists = [hist("diseases group", [2], "h-d"), hist("guitar group", [2], "h-g")]
        results = semantic_search("deseases", hists, StubEmbeddingProvider(), threshold=0.5)
        assert [(r.histogram_id, r.match_kind) for r in results] == [("h-d", SEMANTIC)]

    def test_unreachable_threshold(self, search_fixture):
        results = semantic_search(
            "nonmatching query xyz", search_fixture, StubEmbeddingProvider(), threshold=1.01
        )
        assert [r for r in results if r.match_kind == SEMANTIC] == []

    def test_no_duplicates_when_merged(self, search_fixture):
        results = semantic_search(
            "diseases", search_fixture, StubEmbeddingProvider(), threshold=0.0
        )
        ids = [r.histogram_id for r in results]
        assert len(ids) == len(set(ids))
        kinds = [r.match_kind for r in results]
        assert kinds == sorted(kinds, key=lambda k: 0 if k == EXACT else 1)

    def test_empty_query_rejected(self, search_fixture):
        with pytest.raises(QueryError):
            semantic_search("  ", search_fixture, StubEmbeddingProvider())

    def test_scores_in_unit_interval(self, search_fixture):
        results = semantic_search(
            "diseases", search_fixture, StubEmbeddingProvider(), threshold=0.0
        )
        assert all(0.0 <= r.score <= 1.0 for r in results)


class TestGenerateCandidates:
    def test_prompt_contains_category(self):
        captured = {}

        class Capture:
            def generate(self, prompt):
                captured["prompt"] = prompt
                return ""

        generate_candidate_entities("sexually transmitted diseases", Capture())
        assert captured["prompt"] == "give me examples of sexually transmitted diseases"

    def test_parse_commas_and_newlines(self):
        class Fixed:
            def generate(self, prompt):
                return "HIV, syphilis,\nherpes"

        assert generate_candidate_entities("stds", Fixed()) == ["hiv", "syphilis", "herpes"]

    def test_empty_response(self):
        class Empty:
            def generate(self, prompt):
                return ""

        assert generate_candidate_entities("anything", Empty()) == []

    def test_list_markers_stripped_and_deduped(self):
        class Listy:
            def generate(self, prompt):
                return "1. HIV\n2) syphilis\n- herpes\n* HIV"

        assert generate_candidate_entities("stds", Listy()) == ["hiv", "syphilis", "herpes"]

    def test_capped_at_20(self):
        class Many:
            def generate(self, prompt):
                return ", ".join(f"item{i}" for i in range(50))

        assert len(generate_candidate_entities("things", Many())) == 20

    def test_empty_category_rejected(self):
        with pytest.raises(QueryError):
            generate_candidate_entities(" ", StubGenerator())


class TestSuggestEntities:
    @pytest.fixture()
    def table(self, fixture_corpus):
        return extract_entities(fixture_corpus)

    def test_exact_candidate_ranks_first(self, table):
        suggestions = suggest_dataset_entities(
            ["cancer"], table, StubEmbeddingProvider(), m=5, threshold=0.0
        )
        assert suggestions[0].surface == ("cancer",)
        assert suggestions[0].similarity == pytest.approx(1.0, abs=1e-9)

    def test_matches_brute_force_ranking(self, table):
        provider = StubEmbeddingProvider()
        cache = EmbeddingCache()
        candidates = ["hiv", "syphilis", "herpes"]
        suggestions = suggest_dataset_entities(
            candidates, table, provider, cache, m=10, threshold=0.2
        )
        center = centroid(embed_batch(candidates, provider, cache))
        scored = []
        for entity, vec in zip(
            table, embed_batch([e.surface_text for e in table], provider, cache)
        ):
            sim = float(np.clip(np.dot(center, vec), -1.0, 1.0))
            scored.append((-sim, entity.id))
        scored.sort()
        expected = [(eid, -negsim) for negsim, eid in scored if -negsim >= 0.2][:10]
        assert [(s.entity_id, s.similarity) for s in suggestions] == expected

    def test_threshold_one_excludes_non_identical(self, table):
        suggestions = suggest_dataset_entities(
            ["zzzzqqq not in dataset"], table, StubEmbeddingProvider(), m=5, threshold=1.0
        )
        assert suggestions == []

    def test_cap_applies(self, table):
        suggestions = suggest_dataset_entities(
            ["cancer"], table, StubEmbeddingProvider(), m=3, threshold=0.0
        )
        assert len(suggestions) == 3

    def test_empty_candidates_rejected(self, table):
        with pytest.raises(QueryError):
            suggest_dataset_entities([], table, StubEmbeddingProvider())


class TestCreateUserHistogram:
    def test_builds_user_histogram(self, fixture_corpus):
        table = extract_entities(fixture_corpus)
        ids = [table.find(("hiv",)).id, table.find(("syphilis",)).id]
        histogram = create_user_histogram(
            "sexually transmitted diseases", ids, table, fixture_corpus, sequence=1
        )
        assert histogram.source == USER
        assert histogram.id == "user-1"
        assert len(histogram.buckets) == 2
        for bucket in histogram.buckets:
            entity = table.get(bucket.entity_id)
            assert bucket.count == len(entity.postings)

    def test_subset_selection(self, fixture_corpus):
        table = extract_entities(fixture_corpus)
        ids = [table.find(("hiv",)).id]
        histogram = create_user_histogram("just hiv", ids, table, fixture_corpus, 1)
        assert [b.surface_text for b in histogram.buckets] == ["hiv"]

    def test_sequence_in_id(self, fixture_corpus):
        table = extract_entities(fixture_corpus)
        ids = [table.find(("hiv",)).id]
        assert create_user_histogram("x", ids, table, fixture_corpus, 2).id == "user-2"

    def test_empty_selection_rejected(self, fixture_corpus):
        table = extract_entities(fixture_corpus)
        with pytest.raises(QueryError):
            create_user_histogram("x", [], table, fixture_corpus, 1)

    def test_empty_label_rejected(self, fixture_corpus):
        table = extract_entities(fixture_corpus)
        with pytest.raises(QueryError):
            create_user_histogram(" ", [0], table, fixture_corpus, 1)
