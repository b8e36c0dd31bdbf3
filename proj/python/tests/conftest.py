import random

import pytest


def _conllu(seed=7, docs_per_week=6):
    rng = random.Random(seed)
    mods = ["globale", "italiano", "reale", "fragile", "europeo", "nazionale"]
    verbs = ["crollare", "ripartire", "soffrire", "crescere"]
    others = ["governo", "lavoro", "scuola", "salute", "virus", "paese"]
    lines = []
    for week in range(1, 15):
        phase = 1 if week <= 7 else 2
        for i in range(docs_per_week):
            lines.append(f"# newdoc id = phase{phase}_week{week}_april_{i + 1:02d}")
            for s in range(4):
                mod = rng.choice(mods)
                verb = rng.choice(verbs)
                extra = rng.choice(others)
                words = [
                    ("la", "il", "DET", 2, "det"),
                    ("economia", "economia", "NOUN", 4, "nsubj"),
                    (mod, mod, "ADJ", 2, "amod"),
                    (verb, verb, "VERB", 0, "root"),
                    ("il", "il", "DET", 6, "det"),
                    (extra, extra, "NOUN", 4, "obj"),
                    (".", ".", "PUNCT", 4, "punct"),
                ]
                lines.append(f"# sent_id = {s + 1}")
                lines.append("# text = " + " ".join(w[0] for w in words))
                for n, (form, lemma, upos, head, rel) in enumerate(words, 1):
                    lines.append(f"{n}\t{form}\t{lemma}\t{upos}\t_\t_\t{head}\t{rel}\t_\t_")
                lines.append("")
    return "\n".join(lines) + "\n"


@pytest.fixture(scope="session")
def conllu_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "news.conllu"
    path.write_text(_conllu(), encoding="utf-8")
    return path


@pytest.fixture(scope="session")
def corpus_file(conllu_file):
    import lexis

    out = conllu_file.parent / "corpus.json"
    code, _, err = lexis.run("ingest", conllu_file, "--out", out)
    assert code == 0, err
    return out


@pytest.fixture(scope="session")
def model_file(corpus_file):
    import lexis

    out = corpus_file.parent / "model.json"
    code, _, err = lexis.run("fit", "--corpus", corpus_file, "--k", 3, "--seed", 42,
                             "--iterations", 200, "--burnin", 100, "--thin", 20, "--out", out)
    assert code == 0, err
    return out
