"""Formal sums of transfer-norm-word terms for cyclic groups.

A term V^m_d N^d_k(w) transfers from the subgroup of order d to the top group
of order m the norm from order k to order d of the word w.  The word is a tuple
of letters; "1" is the unit letter.  With trivial Weyl action a word evaluates
to the plain product of its letters.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass(frozen=True, order=True)
class OrbitWord:
    letters: tuple
    stabilizer: int = 1

    def render(self, overline: bool = True) -> str:
        """LaTeX-style monomial: runs become powers, unit letters are dropped."""
        runs = []
        for ch in self.letters:
            if ch == "1":
                continue
            if runs and runs[-1][0] == ch:
                runs[-1][1] += 1
            else:
                runs.append([ch, 1])
        if not runs:
            return "1"
        body = "".join(ch if e == 1 else f"{ch}^{e}" for ch, e in runs)
        if overline and (len(runs) > 1 or runs[0][1] > 1):
            return "\\overline{" + body + "}"
        return body


@dataclass(frozen=True, order=True)
class Term:
    target: int  # d: transfer V^m_d
    source: int  # k: norm N^d_k
    word: OrbitWord
    multiplicity: int = 1

    def render(self, top: int) -> str:
        s = ""
        if self.target != top:
            s += f"V^{top}_{self.target}"
        if self.source != self.target:
            s += f"N^{self.target}_{self.source}"
        w = self.word.render()
        return f"{s}({w})" if s else w


@dataclass
class TambaraExpression:
    """sum of multiplicity * V^top_d N^d_k(word) over the terms."""

    top: int
    source: int
    terms: list = field(default_factory=list)
    kind: str = "sum"
    middle: int | None = None  # n for transfer rules N^m_n V^n_k

    def render(self) -> str:
        parts = []
        for t in self.terms:
            r = t.render(self.top)
            parts.append(r if t.multiplicity == 1 else f"{t.multiplicity}{r}")
        return " + ".join(parts) if parts else "0"

    def to_json_obj(self) -> dict:
        return {
            "kind": self.kind,
            "m": self.top,
            "n": self.middle,
            "k": self.source,
            "rendered": self.render(),
            "terms": [
                {
                    "V": [self.top, t.target],
                    "N": [t.target, t.source],
                    "word": "".join(t.word.letters),
                    "stabilizer": t.word.stabilizer,
                    "multiplicity": t.multiplicity,
                }
                for t in self.terms
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, indent=1) + "\n"

    @classmethod
    def from_json_obj(cls, obj) -> "TambaraExpression":
        terms = [
            Term(t["V"][1], t["N"][1], OrbitWord(tuple(t["word"]), t["stabilizer"]), t["multiplicity"])
            for t in obj["terms"]
        ]
        return cls(obj["m"], obj["k"], terms, obj["kind"], obj["n"])

    def evaluate(self, realization, values: dict):
        """Evaluate at the top level of `realization`.

        `values` maps each letter to an element at level `source`; the letter
        "1" always means the unit.
        """
        total = realization.zero(self.top)
        k = self.source
        for t in self.terms:
            w = realization.one(k)
            for ch in t.word.letters:
                if ch != "1":
                    w = realization.mul(k, w, values[ch])
            if t.target != k:
                w = realization.N(t.target, k, w)
            if t.target != self.top:
                w = realization.V(self.top, t.target, w)
            for _ in range(t.multiplicity):
                total = realization.add(self.top, total, w)
        return total

    def trivial_specialization(self, values: dict):
        """Replace V^m_d by m/d and N^d_k by the (d/k)-th power; words become products."""
        total = 0
        for t in self.terms:
            w = 1
            for ch in t.word.letters:
                if ch != "1":
                    w = w * values[ch]
            total = total + (self.top // t.target) * t.multiplicity * w ** (t.target // t.source)
        return total
