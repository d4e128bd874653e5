import pytest

from texthist.clustering import Cluster, ClusterSet
from texthist.corpus import Corpus
from texthist.extraction import extract_entities
from texthist.labeling import (
    PROMPT_SURFACE_CAP,
    LabelingError,
    RemoteGenerator,
    StubGenerator,
    build_label_prompt,
    cluster_surfaces,
    label_clusters,
    parse_label_response,
)
from texthist.providers import ProviderError


class TestBuildLabelPrompt:
    def test_final_line_lists_surfaces_in_order(self):
        prompt = build_label_prompt(["covid 19", "the flu", "sars"])
        assert prompt.splitlines()[-1] == "covid 19, the flu, sars"

    def test_deterministic(self):
        surfaces = ["covid 19", "the flu", "sars"]
        assert build_label_prompt(surfaces) == build_label_prompt(surfaces)

    def test_single_item_list(self):
        prompt = build_label_prompt(["cancer"])
        assert prompt.splitlines()[-1] == "cancer"
        assert "no label" in prompt  # the sentinel exemplar is always present

    def test_contains_few_shot_pairs(self):
        prompt = build_label_prompt(["x"])
        assert prompt.count("label:") >= 3

    def test_empty_list_rejected(self):
        with pytest.raises(LabelingError):
            build_label_prompt([])


class TestParseLabelResponse:
    def test_trims_whitespace(self):
        assert parse_label_response(" Infectious Diseases\n") == "Infectious Diseases"

    def test_no_label_sentinel(self):
        assert parse_label_response("no label") is None
        assert parse_label_response("No Label") is None
        assert parse_label_response("NONE") is None

    def test_empty_is_no_label(self):
        assert parse_label_response("") is None
        assert parse_label_response("   \n  ") is None

    def test_first_line_only(self):
        assert parse_label_response("diseases\nand more text") == "diseases"

    def test_strips_quotes(self):
        assert parse_label_response('"diseases"') == "diseases"
        assert parse_label_response("'diseases'") == "diseases"

    def test_truncates_to_60_chars(self):
        long = "x" * 100
        result = parse_label_response(long)
        assert len(result) == 60

    def test_idempotent(self):
        for raw in (" Infectious Diseases\n", '"quoted label"', "y" * 80, "ok"):
            once = parse_label_response(raw)
            assert parse_label_response(once) == once


class TestStubGenerator:
    def test_coherent_cluster_labeled_by_top_term(self):
        prompt = build_label_prompt(["cancer", "flu"])
        assert StubGenerator().generate(prompt) == "cancer group"

    def test_incoherent_cluster_gets_no_label(self):
        # eight mutually dissimilar words: mean-vector coherence falls
        # below the stub threshold
        words = ["zebra", "quartz", "onion", "fjord", "mumble", "typhoon", "waltz", "igloo"]
        prompt = build_label_prompt(words)
        assert StubGenerator().generate(prompt) == "no label"

    def test_category_fixture_lookup(self):
        reply = StubGenerator().generate("give me examples of sexually transmitted diseases")
        assert "hiv" in reply and "syphilis" in reply

    def test_unknown_category_empty(self):
        assert StubGenerator().generate("give me examples of quantum chromodynamics") == ""


class TestLabelClusters:
    def make_table(self):
        corpus = Corpus(["cancer cancer cancer flu", "covid sars flu cancer"])
        return corpus, extract_entities(corpus, k_cap=10)

    def cluster_of(self, table, *surfaces):
        ids = tuple(sorted(table.find((s,)).id for s in surfaces))
        return Cluster(entity_ids=ids, cutoff=0.5)

    def test_provider_label_applied(self):
        corpus, table = self.make_table()
        clusters = ClusterSet([self.cluster_of(table, "covid", "flu", "sars")])

        class Fixed:
            def generate(self, prompt):
                return "infectious diseases"

        [labeled] = label_clusters(clusters, table, Fixed())
        assert labeled.label == "infectious diseases"

    def test_no_label_clusters_dropped(self):
        corpus, table = self.make_table()
        clusters = ClusterSet([self.cluster_of(table, "covid", "flu")])

        class Declines:
            def generate(self, prompt):
                return "no label"

        assert label_clusters(clusters, table, Declines()) == []

    def test_stub_labels_by_highest_frequency(self):
        corpus, table = self.make_table()
        clusters = ClusterSet([self.cluster_of(table, "cancer", "flu")])
        [labeled] = label_clusters(clusters, table, StubGenerator())
        assert labeled.label == "cancer group"  # cancer freq 4 vs flu 2

    def test_provider_failure_degrades_with_warning(self):
        corpus, table = self.make_table()
        clusters = ClusterSet(
            [self.cluster_of(table, "cancer", "flu"), self.cluster_of(table, "covid", "sars")]
        )

        class Flaky:
            def __init__(self):
                self.calls = 0

            def generate(self, prompt):
                self.calls += 1
                if self.calls == 1:
                    raise ProviderError("boom")
                return "ok group"

        warnings = []
        labeled = label_clusters(clusters, table, Flaky(), warnings=warnings)
        assert len(labeled) == 1
        assert len(warnings) == 1 and "boom" in warnings[0]

    def test_output_length_bounded_and_all_labeled(self, fixture_corpus):
        table = extract_entities(fixture_corpus)
        ids = tuple(range(8))
        clusters = ClusterSet([Cluster(ids[:4], 0.2), Cluster(ids, 0.5)])
        labeled = label_clusters(clusters, table, StubGenerator())
        assert len(labeled) <= len(clusters.clusters)
        assert all(lc.label for lc in labeled)

    def test_prompt_surface_cap(self):
        texts = [f"word{i:02d}" for i in range(40)]
        corpus = Corpus([" ".join(texts)])
        table = extract_entities(corpus, k_cap=100)
        cluster = Cluster(tuple(range(30)), 0.5)

        seen = {}

        class Capture:
            def generate(self, prompt):
                seen["terms"] = prompt.splitlines()[-1].split(", ")
                return "whatever"

        label_clusters(ClusterSet([cluster]), table, Capture())
        assert len(seen["terms"]) == PROMPT_SURFACE_CAP

    def test_parallel_matches_sequential(self):
        corpus, table = self.make_table()
        clusters = ClusterSet(
            [self.cluster_of(table, "cancer", "flu"), self.cluster_of(table, "covid", "sars")]
        )
        seq = label_clusters(clusters, table, StubGenerator(), parallelism=1)
        par = label_clusters(clusters, table, StubGenerator(), parallelism=4)
        assert seq == par


class TestClusterSurfaces:
    def test_frequency_then_lexicographic(self):
        corpus = Corpus(["beta beta alpha alpha gamma"])
        table = extract_entities(corpus, k_cap=10)
        cluster = Cluster(tuple(e.id for e in table), 0.5)
        assert cluster_surfaces(cluster, table) == ["alpha", "beta", "gamma"]


class TestRemoteGenerator:
    def test_posts_prompt_and_reads_text(self, monkeypatch):
        calls = []

        class FakeResponse:
            status_code = 200
            text = ""

            def json(self):
                return {"text": "infectious diseases"}

        def fake_post(url, json=None, headers=None, timeout=None):
            calls.append((url, json))
            return FakeResponse()

        monkeypatch.setattr("texthist.providers.httpx.post", fake_post)
        generator = RemoteGenerator("http://gen.test/v1")
        assert generator.generate("label these") == "infectious diseases"
        assert calls == [("http://gen.test/v1", {"prompt": "label these"})]

    def test_caps_runaway_output(self, monkeypatch):
        class FakeResponse:
            status_code = 200
            text = ""

            def json(self):
                return {"text": "one two three four five six"}

        monkeypatch.setattr(
            "texthist.providers.httpx.post",
            lambda url, json=None, headers=None, timeout=None: FakeResponse(),
        )
        generator = RemoteGenerator("http://gen.test/v1", max_label_tokens=3)
        assert generator.generate("x") == "one two three"

    def test_missing_text_field(self, monkeypatch):
        class FakeResponse:
            status_code = 200
            text = ""

            def json(self):
                return {"nope": 1}

        monkeypatch.setattr(
            "texthist.providers.httpx.post",
            lambda url, json=None, headers=None, timeout=None: FakeResponse(),
        )
        with pytest.raises(ProviderError, match="text"):
            RemoteGenerator("http://gen.test/v1").generate("x")
