"""Parser for measure spec strings such as ``quotient(gaussian(m=1,T=1),gaussian(m=0))``.

Grammar::

    spec   := name "(" [arg ("," arg)*] ")"
    arg    := spec | key "=" value
    value  := number | complex literal | "(" number "," number ")"

Nested specs are positional; everything else is a keyword.
"""

from __future__ import annotations

import re

from .measures import (
    ConvolutionSpec,
    DetHankelSpec,
    GaussianSpec,
    MeasureSpec,
    MixtureSpec,
    ProductSpec,
    QuotientSpec,
    ScaledSpec,
)

_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z_0-9]*)|([-+0-9.eEj]+)|(.))")


class SpecError(ValueError):
    pass


def _tokens(text: str) -> list[str]:
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise SpecError(f"cannot tokenize at {text[pos:]!r}")
        tok = m.group(1) or m.group(2) or m.group(3)
        if tok.strip():
            out.append(tok)
        pos = m.end()
    return out


# name -> (positional spec count, allowed keywords, builder)
_BUILDERS = {
    "gaussian": (0, {"m", "T", "rescaled"}, lambda a, k: GaussianSpec(float(k.get("m", 1.0)), float(k.get("T", 1.0)), bool(k.get("rescaled", 0)))),
    "mu": (0, {"l"}, lambda a, k: MixtureSpec(float(k.get("l", 0.0)))),
    "dethankel": (0, {"N", "l"}, lambda a, k: DetHankelSpec(_as_int(k.get("N", 1)), float(k.get("l", 0.0)))),
    "product": (2, set(), lambda a, k: ProductSpec(*a)),
    "convolution": (2, set(), lambda a, k: ConvolutionSpec(*a)),
    "scaled": (1, {"c"}, lambda a, k: ScaledSpec(a[0], complex(k.get("c", 1.0)))),
    "quotient": (2, set(), lambda a, k: QuotientSpec(*a)),
}


def _as_int(v) -> int:
    if isinstance(v, complex) or float(v) != int(float(v)):
        raise SpecError(f"expected an integer, got {v}")
    return int(float(v))


class _Parser:
    def __init__(self, toks: list[str]):
        self.toks = toks
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise SpecError(f"expected {expected or 'more input'}, got {tok!r}")
        self.i += 1
        return tok

    def number(self):
        tok = self.peek()
        if tok == "(":
            self.take("(")
            re_ = float(self.take())
            self.take(",")
            im = float(self.take())
            self.take(")")
            return complex(re_, im)
        tok = self.take()
        try:
            return float(tok) if "j" not in tok else complex(tok)
        except ValueError:
            raise SpecError(f"bad number {tok!r}") from None

    def spec(self) -> MeasureSpec:
        name = self.take()
        if name not in _BUILDERS:
            raise SpecError(f"unknown measure {name!r}")
        npos, allowed, build = _BUILDERS[name]
        self.take("(")
        args, kw = [], {}
        while self.peek() != ")":
            if self.i + 1 < len(self.toks) and self.toks[self.i + 1] == "=":
                key = self.take()
                self.take("=")
                if key not in allowed:
                    raise SpecError(f"{name} does not take {key!r}")
                kw[key] = self.number()
            else:
                args.append(self.spec())
            if self.peek() == ",":
                self.take(",")
            elif self.peek() != ")":
                raise SpecError(f"expected ',' or ')', got {self.peek()!r}")
        self.take(")")
        if len(args) != npos:
            raise SpecError(f"{name} takes {npos} nested spec(s), got {len(args)}")
        try:
            return build(args, kw)
        except (TypeError, ValueError) as e:
            raise SpecError(str(e)) from None


def parse_spec(text: str) -> MeasureSpec:
    p = _Parser(_tokens(text))
    out = p.spec()
    if p.peek() is not None:
        raise SpecError(f"trailing input {p.toks[p.i:]}")
    return out


def format_spec(spec: MeasureSpec) -> str:
    """Inverse of ``parse_spec`` (up to float formatting)."""
    if isinstance(spec, GaussianSpec):
        extra = ",rescaled=1" if spec.rescaled else ""
        return f"gaussian(m={spec.m!r},T={spec.T!r}{extra})"
    if isinstance(spec, MixtureSpec):
        return f"mu(l={spec.l!r})"
    if isinstance(spec, DetHankelSpec):
        return f"dethankel(N={spec.N},l={spec.l!r})"
    if isinstance(spec, ProductSpec):
        return f"product({format_spec(spec.a)},{format_spec(spec.b)})"
    if isinstance(spec, ConvolutionSpec):
        return f"convolution({format_spec(spec.a)},{format_spec(spec.b)})"
    if isinstance(spec, ScaledSpec):
        c = complex(spec.c)
        return f"scaled({format_spec(spec.inner)},c=({c.real!r},{c.imag!r}))"
    if isinstance(spec, QuotientSpec):
        return f"quotient({format_spec(spec.num)},{format_spec(spec.den)})"
    raise TypeError(spec)
