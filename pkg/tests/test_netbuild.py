import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from newsframes.lexicon import SynonymMap, load_emotion_lexicon
from newsframes.netbuild import (
    BuildConfig, NetworkError, Tfmn, add_synonym_layer, build_from_texts,
    build_tfmn, cooccurrence_parse, edges_tsv, merge_tfmn, nodes_tsv, parse_conllu, parse_conllu_text,
    tfmn_from_dict, tfmn_to_dict, tfmn_to_json,
)
from conftest import FIXTURES
from strategies import tfmns

DEP = BuildConfig(mode="dependency")
CO = BuildConfig()


def test_conllu_counts():
    doc = parse_conllu(FIXTURES / "sample.conllu")
    assert (doc.token_count, len(doc.sentences), doc.root_count) == (14, 3, 3)
    assert [t.stem for t in doc.sentences[0]] == ["il", "vaccin", "funzion", "ben", "."]


def test_conllu_errors_carry_line_numbers():
    with pytest.raises(NetworkError, match=r"line 5: expected 10 columns, found 9"):
        parse_conllu(FIXTURES / "bad_columns.conllu")
    with pytest.raises(NetworkError, match=r"line 11: sentence has 2 roots"):
        parse_conllu(FIXTURES / "multi_root.conllu")


@pytest.mark.parametrize("row, message", [
    ("1\ta\ta\tNOUN\t_\t_\tx\troot\t_\t_", "non-integer HEAD"),
    ("1\ta\ta\tNOUN\t_\t_\t-1\troot\t_\t_", "negative HEAD"),
    ("2\ta\ta\tNOUN\t_\t_\t0\troot\t_\t_", "out of sequence"),
    ("1\ta\ta\tNOUN\t_\t_\t0\troot\t_\t_\n2\tb\tb\tNOUN\t_\t_\t5\tdep\t_\t_", "HEAD 5 out of range"),
    ("1\ta\ta\tNOUN\t_\t_\t1\tdep\t_\t_", "no root"),
])
def test_conllu_row_errors(row, message):
    with pytest.raises(NetworkError, match=f"line 1: .*{message}"):
        parse_conllu_text(row + "\n")


def test_dependency_edges_on_fixture():
    net = build_tfmn([parse_conllu(FIXTURES / "sample.conllu")], DEP)
    assert dict(net.edges) == {
        ("ben", "funzion"): (1, 0), ("ben", "vaccin"): (1, 0), ("funzion", "vaccin"): (1, 0),
        ("govern", "parl"): (1, 0), ("govern", "vaccin"): (1, 0), ("parl", "vaccin"): (1, 0),
        ("rar", "trombos"): (1, 0),
    }
    near = build_tfmn([parse_conllu(FIXTURES / "sample.conllu")], BuildConfig(mode="dependency", max_tree_distance=1))
    assert set(near.edges) == {("ben", "funzion"), ("funzion", "vaccin"), ("govern", "parl"), ("parl", "vaccin"), ("rar", "trombos")}


def test_tree_distance_passes_through_filtered_tokens():
    text = "1\tcasa\tcasa\tNOUN\t_\t_\t2\tnmod\t_\t_\n2\tdi\tdi\tADP\t_\t_\t0\troot\t_\t_\n3\tmare\tmare\tNOUN\t_\t_\t2\tnmod\t_\t_\n"
    doc = parse_conllu_text(text)
    assert set(build_tfmn([doc], BuildConfig(mode="dependency", max_tree_distance=2)).edges) == {("cas", "mar")}
    assert not build_tfmn([doc], BuildConfig(mode="dependency", max_tree_distance=1)).edges


def test_cooccurrence_parse_drops_stopwords():
    doc = cooccurrence_parse("Il vaccino funziona bene. La fiducia cresce!", CO)
    assert [[t.stem for t in s] for s in doc.sentences] == [["vaccin", "funzion", "ben"], ["fiduc", "cresc"]]


def test_cooccurrence_window():
    text = "alfa beta gamma delta epsilon"
    net = build_from_texts([text], CO)
    assert len(net.edges) == 4 + 3 + 2
    assert ("alfa", "epsilon") not in net.edges
    assert len(build_from_texts([text], BuildConfig(window=2)).edges) == 4


def test_repeated_pairs_accumulate_and_no_self_loops():
    net = build_from_texts(["vaccino vaccino fiducia", "vaccini fiducia"], CO)
    assert dict(net.edges) == {("fiduc", "vaccin"): (3, 0)}


def test_sentences_do_not_link():
    net = build_from_texts(["alfa beta. gamma delta"], CO)
    assert set(net.edges) == {("alfa", "bet"), ("delt", "gamm")}


def test_mode_mismatch_rejected():
    with pytest.raises(NetworkError):
        build_tfmn([parse_conllu(FIXTURES / "sample.conllu")], CO)
    with pytest.raises(NetworkError):
        build_tfmn([cooccurrence_parse("a b", CO)], DEP)


def test_config_validation():
    for bad in (dict(mode="x"), dict(window=1), dict(max_tree_distance=0)):
        with pytest.raises(NetworkError):
            BuildConfig(**bad)


def test_synonym_layer():
    syn = SynonymMap.from_pairs([("paur", "timor"), ("paur", "fiduc")])
    net = add_synonym_layer(build_from_texts(["paura timore", "paura domani"], CO), syn)
    assert net.edges[("paur", "timor")] == (1, 1)
    assert net.layer_weight("paur", "timor", "combined") == 2
    assert ("fiduc", "paur") not in net.edges  # fiducia never occurs
    assert net.adjacency("synonym")["paur"] == {"timor": 1}


def test_nodes_carry_emotions():
    lex = load_emotion_lexicon(FIXTURES / "lexicon_small.tsv")
    net = build_from_texts(["paura e morte"], CO, lexicon=lex)
    assert net.nodes["mort"] == {"fear", "sadness"}
    assert nodes_tsv(net) == "mort\tfear,sadness\t1\npaur\tfear\t1\n"
    assert edges_tsv(net) == "mort\tpaur\t1\t0\n"


def test_json_roundtrip():
    lex = load_emotion_lexicon(FIXTURES / "lexicon_small.tsv")
    net = build_from_texts(["paura e morte, fiducia nel vaccino"], BuildConfig(window=3), lexicon=lex)
    back = tfmn_from_dict(json.loads(tfmn_to_json(net)))
    assert back == net


def test_merge_requires_same_config():
    with pytest.raises(NetworkError):
        merge_tfmn(Tfmn.empty(CO), Tfmn.empty(BuildConfig(window=3)))


@settings(max_examples=60, deadline=None)
@given(tfmns(), tfmns(), tfmns())
def test_merge_is_a_commutative_monoid(a, b, c):
    assert merge_tfmn(a, b) == merge_tfmn(b, a)
    assert merge_tfmn(merge_tfmn(a, b), c) == merge_tfmn(a, merge_tfmn(b, c))
    assert merge_tfmn(a, Tfmn.empty(CO)) == a


@settings(max_examples=40, deadline=None)
@given(tfmns())
def test_edge_invariants(net):
    for (a, b), (ws, wy) in net.edges.items():
        assert a < b and (ws > 0 or wy > 0)
        assert a in net.nodes and b in net.nodes
    assert all(any(s in e for e in net.edges) for s in net.nodes)


def test_empty_text_gives_empty_document():
    doc = cooccurrence_parse("", CO)
    assert doc.sentences == () and doc.token_count == 0
    assert not build_tfmn([doc], CO).nodes


def _chain_conllu(words):
    rows = [f"{i}\t{w}\t{w}\tNOUN\t_\t_\t{i - 1}\t{'root' if i == 1 else 'dep'}\t_\t_" for i, w in enumerate(words, 1)]
    return parse_conllu_text("\n".join(rows) + "\n")


@pytest.mark.parametrize("dist, expected", [
    (1, {("alfa", "bet"), ("bet", "gamm")}),
    (2, {("alfa", "bet"), ("bet", "gamm"), ("alfa", "gamm")}),
])
def test_chain_tree_distance(dist, expected):
    doc = _chain_conllu(["alfa", "beta", "gamma"])
    net = build_tfmn([doc], BuildConfig(mode="dependency", max_tree_distance=dist))
    assert set(net.edges) == {tuple(sorted(e)) for e in expected}


def _random_conllu(rng, n_sent):
    """Random trees with random UPOS, as CoNLL-U text."""
    upos = ["NOUN", "VERB", "ADJ", "ADV", "PROPN", "DET", "ADP", "PUNCT"]
    words = ["casa", "mare", "sole", "luna", "vento", "fiume", "monte", "strada", "porto", "campo"]
    blocks = []
    for _ in range(n_sent):
        n = int(rng.integers(1, 12))
        root = int(rng.integers(1, n + 1))
        order = [root] + [i for i in rng.permutation(np.arange(1, n + 1)).tolist() if i != root]
        heads = {root: 0}
        for k, node in enumerate(order[1:], 1):
            heads[node] = order[int(rng.integers(0, k))]
        rows = [
            f"{i}\t{words[int(rng.integers(0, len(words)))]}\t_\t{upos[int(rng.integers(0, len(upos)))]}\t_\t_\t{heads[i]}\tdep\t_\t_"
            for i in range(1, n + 1)
        ]
        blocks.append("\n".join(rows) + "\n")
    return "\n".join(blocks)


def _apsp_oracle(text, max_dist):
    """Floyd-Warshall per sentence over the undirected tree, then filter."""
    keep = {"NOUN", "PROPN", "VERB", "ADJ", "ADV"}
    counts = {}
    from newsframes.corpus import stem
    for block in text.strip().split("\n\n"):
        rows = [r.split("\t") for r in block.splitlines()]
        n = len(rows)
        inf = float("inf")
        d = [[0 if i == j else inf for j in range(n)] for i in range(n)]
        for i, r in enumerate(rows):
            h = int(r[6]) - 1
            if h >= 0:
                d[i][h] = d[h][i] = 1
        for k in range(n):
            for i in range(n):
                for j in range(n):
                    if d[i][k] + d[k][j] < d[i][j]:
                        d[i][j] = d[i][k] + d[k][j]
        for i in range(n):
            for j in range(i + 1, n):
                if rows[i][3] in keep and rows[j][3] in keep and d[i][j] <= max_dist:
                    a, b = sorted((stem(rows[i][1]), stem(rows[j][1])))
                    if a != b:
                        counts[(a, b)] = counts.get((a, b), 0) + 1
    return counts


@pytest.mark.parametrize("seed", range(20))
def test_dependency_edges_match_shortest_path_oracle(seed):
    rng = np.random.default_rng(seed)
    text = _random_conllu(rng, 6)
    for dist in (1, 2, 3):
        net = build_tfmn([parse_conllu_text(text)], BuildConfig(mode="dependency", max_tree_distance=dist))
        assert {e: w[0] for e, w in net.edges.items()} == _apsp_oracle(text, dist)


def test_synonym_layer_counts_only_applicable_pairs():
    syn = SynonymMap.from_pairs([("paur", "timor"), ("paur", "assent"), ("mort", "deces"), ("cas", "cas")])
    base = build_from_texts(["paura timore morte domani"], CO)
    net = add_synonym_layer(base, syn)
    # only paura-timore has both endpoints in the net
    added = [e for e, (_, wy) in net.edges.items() if wy]
    assert added == [("paur", "timor")]
    assert len(net.edges) == len(base.edges)
    lonely = build_from_texts(["domani sera"], CO)
    assert add_synonym_layer(lonely, syn) == lonely


@settings(max_examples=30, deadline=None)
@given(st.permutations(["Paura e morte nel paese.", "Fiducia nel vaccino oggi.", "Vaccino, paura, domani.", "Il sole di sera."]))
def test_build_is_order_independent(texts):
    docs = [cooccurrence_parse(t, CO) for t in texts]
    ref = build_tfmn([cooccurrence_parse(t, CO) for t in sorted(texts)], CO)
    assert build_tfmn(docs, CO) == ref


def test_exports_carry_total_degree():
    net = build_from_texts(["alfa beta gamma"], CO)
    assert nodes_tsv(net).splitlines() == ["alfa\t\t2", "bet\t\t2", "gamm\t\t2"]
    assert tfmn_to_dict(net)["degree"] == {"alfa": 2, "bet": 2, "gamm": 2}
    assert net.total_degree("bet") == 2 and net.total_degree("zzz") == 0
