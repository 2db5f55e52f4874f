"""Averaged structured perceptron over reference-line features.

Decoding is first-order Viterbi with the B-/I- scheme enforced as hard
transition constraints.  Per-token confidence is a softmax over the label
scores of that token with its Viterbi neighbours held fixed, divided by a
temperature fitted on held-out lines at training time (raw perceptron
scores are large and would saturate every confidence at 1).
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .features import featurize
from .lexicons import Lexicons
from .normalize import tokenize
from .training_data import LABELS, LabeledSequence, field_of

__all__ = [
    "Model",
    "Prediction",
    "FieldStats",
    "FieldReport",
    "MODEL_FORMAT",
    "observations",
    "prepare",
    "train",
    "train_sequences",
    "predict",
    "repair_labels",
    "evaluate",
    "token_accuracy",
]

MODEL_FORMAT = "cyrcite-perceptron"
MODEL_VERSION = 1

_L = len(LABELS)
_LABEL_INDEX = {lab: k for k, lab in enumerate(LABELS)}
_START = _L  # extra row of the transition matrix


def _allowed_matrix() -> np.ndarray:
    allowed = np.ones((_L + 1, _L), dtype=bool)
    for j, cur in enumerate(LABELS):
        if not cur.startswith("I-"):
            continue
        for i in range(_L + 1):
            prev = LABELS[i] if i < _L else "O"
            allowed[i, j] = field_of(prev) == cur[2:]
    return allowed


_ALLOWED = _allowed_matrix()
_MASK = np.where(_ALLOWED, 0.0, -np.inf)


def _shape(text: str) -> str:
    out = []
    for ch in text:
        c = "X" if ch.isupper() else "x" if ch.islower() else "d" if ch.isdigit() else ch
        if not out or out[-1] != c:
            out.append(c)
    return "".join(out)[:8]


def _token_obs(text: str, feats: dict, prefix: str) -> list[str]:
    obs = [f"{prefix}last={text[-1]}", f"{prefix}first={text[0]}"]
    for name in sorted(feats):
        val = feats[name]
        if isinstance(val, bool):
            if val:
                obs.append(prefix + name)
        else:
            obs.append(f"{prefix}{name}={val}")
    return obs


def observations(texts: Sequence[str], feats: Sequence[dict]) -> list[list[str]]:
    """Expand feature vectors into sparse observation strings per token.

    The window covers the token and its two neighbours; any feature name
    present in the vector is used, so new features need no code here.
    """
    n = len(texts)
    out = []
    for i in range(n):
        text = texts[i]
        obs = ["bias", f"w={text.lower()}", f"shape={_shape(text)}", f"rel={4 * i // max(n, 1)}"]
        obs += _token_obs(text, feats[i], "")
        if i == 0:
            obs.append("BOS")
        else:
            obs += _token_obs(texts[i - 1], feats[i - 1], "-1:")
            obs.append(f"-1:w={texts[i - 1].lower()}")
        if i == n - 1:
            obs.append("EOS")
        else:
            obs += _token_obs(texts[i + 1], feats[i + 1], "+1:")
            obs.append(f"+1:w={texts[i + 1].lower()}")
        out.append(obs)
    return out


def prepare(seq: LabeledSequence, lexicons: Lexicons, year_range=None):
    """(texts, feature vectors) for a labeled sequence's tokens."""
    tokens = tokenize(" ".join(seq.tokens))
    return list(seq.tokens), featurize(tokens, lexicons, year_range)


@dataclass
class Model:
    labels: tuple[str, ...]
    features: dict[str, int]
    weights: np.ndarray  # (n_features, n_labels)
    transitions: np.ndarray  # (n_labels + 1, n_labels); last row = start
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if tuple(self.labels) != LABELS:
            raise ValueError(f"model label set must be {LABELS}")

    @property
    def temperature(self) -> float:
        return float(self.metadata.get("temperature", 1.0))

    def emissions(self, obs: list[list[str]]) -> np.ndarray:
        scores = np.zeros((len(obs), _L))
        for i, tok_obs in enumerate(obs):
            idx = [self.features[o] for o in tok_obs if o in self.features]
            if idx:
                scores[i] = self.weights[idx].sum(axis=0)
        return scores

    def to_json(self) -> str:
        names = sorted(self.features, key=self.features.__getitem__)
        weights = {
            name: [float(x) for x in self.weights[self.features[name]]]
            for name in names
            if np.any(self.weights[self.features[name]])
        }
        doc = {
            "format": MODEL_FORMAT,
            "version": MODEL_VERSION,
            "labels": list(self.labels),
            "metadata": self.metadata,
            "transitions": [[float(x) for x in row] for row in self.transitions],
            "weights": weights,
        }
        return json.dumps(doc, ensure_ascii=False, sort_keys=True, indent=0)

    @classmethod
    def from_json(cls, text: str) -> "Model":
        doc = json.loads(text)
        if doc.get("format") != MODEL_FORMAT or doc.get("version") != MODEL_VERSION:
            raise ValueError("not a cyrcite model file (or unsupported version)")
        names = list(doc["weights"])
        features = {name: i for i, name in enumerate(names)}
        weights = np.array([doc["weights"][n] for n in names], dtype=float).reshape(len(names), _L)
        return cls(
            labels=tuple(doc["labels"]),
            features=features,
            weights=weights,
            transitions=np.array(doc["transitions"], dtype=float),
            metadata=doc["metadata"],
        )

    def save(self, path):
        Path(path).write_text(self.to_json(), encoding="utf-8")

    @classmethod
    def load(cls, path) -> "Model":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))

    @classmethod
    def default(cls) -> "Model":
        from importlib import resources

        return cls.from_json(resources.files("cyrcite.data").joinpath("model.json").read_text(encoding="utf-8"))


def _viterbi(emis: np.ndarray, trans: np.ndarray) -> list[int]:
    n = emis.shape[0]
    if n == 0:
        return []
    t = trans + _MASK
    score = t[_START] + emis[0]
    back = np.zeros((n, _L), dtype=np.int64)
    for i in range(1, n):
        cand = score[:, None] + t[:_L]
        back[i] = np.argmax(cand, axis=0)
        score = cand[back[i], np.arange(_L)] + emis[i]
    path = [int(np.argmax(score))]
    for i in range(n - 1, 0, -1):
        path.append(int(back[i, path[-1]]))
    return path[::-1]


def _local_scores(emis: np.ndarray, t: np.ndarray, path: Sequence[int], i: int) -> np.ndarray:
    """Scores of every label at ``i`` with the neighbours fixed to ``path``."""
    s = emis[i] + t[path[i - 1] if i else _START]
    if i + 1 < len(path):
        s = s + t[:_L, path[i + 1]]
    return s


def _confidences(emis: np.ndarray, trans: np.ndarray, path: list[int], temperature: float = 1.0) -> list[float]:
    t = trans + _MASK
    out = []
    for i in range(len(path)):
        s = _local_scores(emis, t, path, i) / temperature
        finite = np.isfinite(s)
        s = s - s[finite].max()
        p = np.where(finite, np.exp(np.where(finite, s, 0.0)), 0.0)
        out.append(float(p[path[i]] / p.sum()))
    return out


def repair_labels(labels: Sequence[str]) -> list[str]:
    """Rewrite orphan ``I-X`` labels as ``B-X``."""
    out, prev = [], "O"
    for lab in labels:
        if lab.startswith("I-") and field_of(prev) != lab[2:]:
            lab = "B-" + lab[2:]
        if lab not in LABELS:  # "I-Y" is not in the scheme
            lab = "B-" + lab[2:]
        out.append(lab)
        prev = lab
    return out


@dataclass(frozen=True)
class Prediction:
    labels: tuple[str, ...]
    confidences: tuple[float, ...]

    def sequence(self, texts: Sequence[str]) -> LabeledSequence:
        return LabeledSequence(tuple(texts), self.labels)


def predict(model: Model, texts: Sequence[str], feats: Sequence[dict]) -> Prediction:
    if not texts:
        return Prediction((), ())
    emis = model.emissions(observations(texts, feats))
    path = _viterbi(emis, model.transitions)
    labels = repair_labels([model.labels[k] for k in path])
    conf = _confidences(emis, model.transitions, path, model.temperature)
    return Prediction(tuple(labels), tuple(conf))


def _corpus_hash(rows) -> str:
    h = hashlib.sha256()
    for texts, _, labels in rows:
        for t, lab in zip(texts, labels):
            h.update(f"{t}\t{lab}\n".encode("utf-8"))
        h.update(b"\n")
    return h.hexdigest()


_MIN_CALIBRATION_ROWS = 10
_TEMPERATURES = np.logspace(0, 2, 41)  # never sharpen beyond the raw scores


def _check_rows(rows):
    for texts, feats, labels in rows:
        if len(texts) != len(labels) or len(feats) != len(labels):
            raise ValueError("texts, features and labels must align")
        bad = [lab for lab in labels if lab not in _LABEL_INDEX]
        if bad:
            raise ValueError(f"invalid label(s) in corpus: {sorted(set(bad))}")
        LabeledSequence(tuple(texts), tuple(labels))  # scheme check


def _fit(rows, epochs: int, seed: int) -> Model:
    obs_rows = [observations(t, f) for t, f, _ in rows]
    vocab = sorted({o for obs in obs_rows for tok in obs for o in tok})
    features = {name: i for i, name in enumerate(vocab)}
    idx_rows = [[np.array([features[o] for o in tok], dtype=np.int64) for tok in obs] for obs in obs_rows]
    gold_rows = [[_LABEL_INDEX[lab] for lab in labels] for _, _, labels in rows]

    W = np.zeros((len(vocab), _L))
    T = np.zeros((_L + 1, _L))
    W_acc = np.zeros_like(W)  # sum of c * update, for lazy averaging
    T_acc = np.zeros_like(T)
    c = 1
    rng = np.random.default_rng(seed)
    order = np.arange(len(rows))
    for _ in range(epochs):
        rng.shuffle(order)
        for r in order:
            idx, gold = idx_rows[r], gold_rows[r]
            emis = np.stack([W[ix].sum(axis=0) for ix in idx])
            pred = _viterbi(emis, T)
            if pred != gold:
                prev_g = prev_p = _START
                for i, (g, p) in enumerate(zip(gold, pred)):
                    if g != p:
                        W[idx[i], g] += 1.0
                        W[idx[i], p] -= 1.0
                        W_acc[idx[i], g] += c
                        W_acc[idx[i], p] -= c
                    if g != p or prev_g != prev_p:
                        T[prev_g, g] += 1.0
                        T[prev_p, p] -= 1.0
                        T_acc[prev_g, g] += c
                        T_acc[prev_p, p] -= c
                    prev_g, prev_p = g, p
            c += 1
    return Model(LABELS, features, W - W_acc / c, T - T_acc / c)


def _fit_temperature(model: Model, rows) -> float:
    """Temperature minimizing the held-out negative log pseudo-likelihood."""
    t = model.transitions + _MASK
    scores, golds = [], []
    for texts, feats, labels in rows:
        emis = model.emissions(observations(texts, feats))
        gold = [_LABEL_INDEX[lab] for lab in labels]
        for i in range(len(gold)):
            scores.append(_local_scores(emis, t, gold, i))
            golds.append(gold[i])
    if not scores:
        return 1.0
    S = np.stack(scores)
    g = np.array(golds)
    finite = np.isfinite(S)
    best, best_nll = 1.0, np.inf
    for temp in _TEMPERATURES:
        z = np.where(finite, S / temp, -np.inf)
        m = z.max(axis=1, keepdims=True)
        lse = m[:, 0] + np.log(np.exp(z - m).sum(axis=1))
        nll = float(np.mean(lse - z[np.arange(len(g)), g]))
        if nll < best_nll:
            best, best_nll = float(temp), nll
    return best


def train(
    rows: Sequence[tuple[Sequence[str], Sequence[dict], Sequence[str]]],
    epochs: int = 20,
    seed: int = 0,
    calibrate: bool = True,
) -> Model:
    """Fit the perceptron on ``(texts, feature vectors, gold labels)`` rows.

    Visiting order is reshuffled each epoch from ``seed``; the result is a
    pure function of (rows, epochs, seed).  With ``calibrate``, a model fitted
    on 80% of the rows sets the confidence temperature on the other 20%.
    """
    rows = [(list(t), list(f), list(y)) for t, f, y in rows]
    if not rows:
        raise ValueError("cannot train on an empty corpus")
    _check_rows(rows)
    model = _fit(rows, epochs, seed)
    temperature = 1.0
    if calibrate and len(rows) >= _MIN_CALIBRATION_ROWS:
        perm = np.random.default_rng(seed).permutation(len(rows))
        cut = int(len(rows) * 0.8)
        probe = _fit([rows[k] for k in perm[:cut]], epochs, seed)
        temperature = _fit_temperature(probe, [rows[k] for k in perm[cut:]])
    model.metadata = {
        "epochs": epochs,
        "seed": seed,
        "n_sequences": len(rows),
        "corpus_sha256": _corpus_hash(rows),
        "temperature": round(temperature, 6),
    }
    return model


def train_sequences(
    seqs: Iterable[LabeledSequence],
    lexicons: Lexicons,
    epochs: int = 20,
    seed: int = 0,
    year_range=None,
) -> Model:
    rows = []
    for seq in seqs:
        texts, feats = prepare(seq, lexicons, year_range)
        rows.append((texts, feats, list(seq.labels)))
    return train(rows, epochs=epochs, seed=seed)


def token_accuracy(model: Model, rows) -> float:
    hit = total = 0
    for texts, feats, labels in rows:
        pred = predict(model, texts, feats).labels
        hit += sum(p == g for p, g in zip(pred, labels))
        total += len(labels)
    return hit / total if total else 1.0


@dataclass(frozen=True)
class FieldStats:
    count: int
    mean: float
    var: float
    min: float
    max: float

    @classmethod
    def of(cls, values: Sequence[float]) -> "FieldStats":
        if not values:
            nan = math.nan
            return cls(0, nan, nan, nan, nan)
        a = np.asarray(values, dtype=float)
        return cls(len(a), float(a.mean()), float(a.var()), float(a.min()), float(a.max()))


REPORT_FIELDS = ("A", "O", "T", "Y")
REPORT_COLUMNS = ("count", "mean", "var", "min", "max")


@dataclass(frozen=True)
class FieldReport:
    rows: dict  # field letter -> FieldStats

    def render(self, digits: int = 2) -> str:
        lines = ["field\t" + "\t".join(REPORT_COLUMNS)]
        for fld in REPORT_FIELDS:
            s = self.rows[fld]
            vals = [f"{v:.{digits}f}" if not math.isnan(v) else "-" for v in (s.mean, s.var, s.min, s.max)]
            lines.append("\t".join([fld, str(s.count)] + vals))
        return "\n".join(lines) + "\n"


def evaluate(model: Model, rows: Iterable[tuple]) -> tuple[FieldReport, list[tuple[str, str, float]]]:
    """Per-field confidence statistics over predicted tokens.

    ``rows`` are ``(texts, feats)`` or ``(texts, feats, gold)``; gold labels
    are ignored.  Also returns the raw ``(token, field, confidence)`` dump.
    """
    groups = {fld: [] for fld in REPORT_FIELDS}
    dump = []
    for row in rows:
        texts, feats = row[0], row[1]
        pred = predict(model, texts, feats)
        for text, lab, conf in zip(texts, pred.labels, pred.confidences):
            fld = field_of(lab) or "O"
            groups[fld].append(conf)
            dump.append((text, fld, conf))
    return FieldReport({fld: FieldStats.of(v) for fld, v in groups.items()}), dump
