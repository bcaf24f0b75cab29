"""Recipe language for building groups.

    recipe := atom ( "x" atom )*
    atom   := base [ "^" INT ]
    base   := cyclic(INT) | dihedral(INT) | ea(INT, INT) | dic(recipe)
            | sdp(recipe, autref, INT) | builtin(NAME) | perm(gen {, gen})
            | su3(INT) | u(INT) | famA(INT, INT) | famB(recipe, INT)
            | famC(NAME) | famD(NAME, INT) | ( recipe )
    autref := id | inv | gens: INT+ -> INT+ | aut: INT+
    gen    := cycle+        cycle := ( INT {, INT} )
    NAME   := identifier [ ( INT ) ]

``x`` is left-associative and ``g^k`` is the k-fold direct power expanded
left to right.  Printing is canonical: print(parse(s)) reparses to an equal
tree.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Union

from .errors import EvalError, GroupError, ParseError

# AST -------------------------------------------------------------------------------


@dataclass(frozen=True)
class Call:
    """A constructor call: ``kind`` is the keyword, ``args`` its parsed arguments."""

    kind: str
    args: tuple


@dataclass(frozen=True)
class Product:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Power:
    base: "Node"
    k: int


@dataclass(frozen=True)
class AutRef:
    kind: str  # "id", "inv", "gens" or "aut"
    src: tuple[int, ...] = ()
    dst: tuple[int, ...] = ()


Node = Union[Call, Product, Power]

# keyword -> argument signature; "r" recipe, "i" int, "n" name, "a" autref, "p" perm gens
SIGNATURES = {
    "cyclic": "i",
    "dihedral": "i",
    "ea": "ii",
    "dic": "r",
    "sdp": "rai",
    "builtin": "n",
    "perm": "p",
    "su3": "i",
    "u": "i",
    "famA": "ii",
    "famB": "ri",
    "famC": "n",
    "famD": "ni",
}

# lexer ------------------------------------------------------------------------------------


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "ident", "op", "eof"
    text: str
    line: int
    col: int


_OPS = ("->", "(", ")", ",", "^", ":")


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if ch.isspace():
            i, col = i + 1, col + 1
            continue
        after_atom = out and (out[-1].kind == "int" or out[-1].text == ")")
        if ch == "x" and after_atom:
            # product operator, even when glued to the next word ("(2)xcyclic(3)")
            out.append(Token("op", "x", line, col))
            i, col = i + 1, col + 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            out.append(Token("int", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            out.append(Token("op" if word == "x" else "ident", word, line, col))
            col += j - i
            i = j
            continue
        op = next((o for o in _OPS if text.startswith(o, i)), None)
        if op is None:
            raise ParseError(f"unexpected character {ch!r}", line, col)
        out.append(Token("op", op, line, col))
        i += len(op)
        col += len(op)
    out.append(Token("eof", "", line, col))
    return out


# parser ------------------------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def fail(self, expected: tuple[str, ...], what: str | None = None):
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise ParseError(what or f"unexpected {found}", t.line, t.col, expected)

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind not in ("op", "ident"):
            self.fail((repr(text),))
        t = self.tok
        self.pos += 1
        return t

    def accept(self, text: str) -> bool:
        if self.tok.kind in ("op", "ident") and self.tok.text == text:
            self.pos += 1
            return True
        return False

    def integer(self) -> int:
        if self.tok.kind != "int":
            self.fail(("INT",))
        v = int(self.tok.text)
        self.pos += 1
        return v

    def name(self) -> str:
        if self.tok.kind != "ident":
            self.fail(("NAME",))
        word = self.tok.text
        self.pos += 1
        if self.accept("("):
            word = f"{word}({self.integer()})"
            self.expect(")")
        return word

    def recipe(self) -> Node:
        node = self.atom()
        while self.accept("x"):
            node = Product(node, self.atom())
        return node

    def atom(self) -> Node:
        node = self.base()
        if self.accept("^"):
            node = Power(node, self.integer())
        return node

    def base(self) -> Node:
        t = self.tok
        if self.accept("("):
            node = self.recipe()
            self.expect(")")
            return node
        if t.kind != "ident" or t.text not in SIGNATURES:
            self.fail(tuple(sorted(SIGNATURES)) + ("'('",))
        self.pos += 1
        self.expect("(")
        args = []
        for i, kind in enumerate(SIGNATURES[t.text]):
            if i:
                self.expect(",")
            args.append(self.argument(kind))
        self.expect(")")
        return Call(t.text, tuple(args))

    def argument(self, kind: str):
        if kind == "i":
            return self.integer()
        if kind == "r":
            return self.recipe()
        if kind == "n":
            return self.name()
        if kind == "a":
            return self.autref()
        return self.perm_gens()

    def autref(self) -> AutRef:
        if self.accept("id"):
            return AutRef("id")
        if self.accept("inv"):
            return AutRef("inv")
        if self.accept("gens"):
            self.expect(":")
            src = self.int_run()
            self.expect("->")
            dst = self.int_run()
            return AutRef("gens", src, dst)
        if self.accept("aut"):
            self.expect(":")
            return AutRef("aut", (), self.int_run())
        self.fail(("'id'", "'inv'", "'gens:'", "'aut:'"))

    def int_run(self) -> tuple[int, ...]:
        vals = [self.integer()]
        while self.tok.kind == "int":
            vals.append(self.integer())
        return tuple(vals)

    def perm_gens(self) -> tuple:
        gens = [self.perm_gen()]
        while self.accept(","):
            gens.append(self.perm_gen())
        return tuple(gens)

    def perm_gen(self) -> tuple:
        cycles = []
        while self.tok.text == "(" and self.tok.kind == "op":
            self.pos += 1
            cyc = [self.integer()]
            while self.accept(","):
                cyc.append(self.integer())
            self.expect(")")
            cycles.append(tuple(cyc))
        if not cycles:
            self.fail(("'('",), "expected a cycle")
        return tuple(cycles)


def parse_recipe(text: str) -> Node:
    p = _Parser(text)
    node = p.recipe()
    if p.tok.kind != "eof":
        p.fail(("'x'", "'^'", "end of input"))
    return node


# printer ----------------------------------------------------------------------------------


def print_recipe(node: Node) -> str:
    if isinstance(node, Product):
        right = print_recipe(node.right)
        if isinstance(node.right, Product):
            right = f"({right})"
        return f"{print_recipe(node.left)} x {right}"
    if isinstance(node, Power):
        base = print_recipe(node.base)
        if isinstance(node.base, (Product, Power)):
            base = f"({base})"
        return f"{base}^{node.k}"
    parts = [_print_arg(kind, a) for kind, a in zip(SIGNATURES[node.kind], node.args)]
    return f"{node.kind}({', '.join(parts)})"


def _print_arg(kind: str, a) -> str:
    if kind == "i" or kind == "n":
        return str(a)
    if kind == "r":
        return print_recipe(a)
    if kind == "a":
        if a.kind in ("id", "inv"):
            return a.kind
        if a.kind == "gens":
            return f"gens: {' '.join(map(str, a.src))} -> {' '.join(map(str, a.dst))}"
        return f"aut: {' '.join(map(str, a.dst))}"
    return ", ".join("".join("(" + ",".join(map(str, c)) + ")" for c in gen) for gen in a)


# evaluation -------------------------------------------------------------------------------


def eval_recipe(node: Node | str):
    """Build the group described by a recipe (AST or text); the canonical
    recipe string is stored as ``meta['recipe']``."""
    if isinstance(node, str):
        node = parse_recipe(node)
    return _eval_cached(node)


@lru_cache(maxsize=64)
def _eval_cached(node: Node):
    G = _eval(node)
    return G.with_meta(recipe=print_recipe(node))


def _eval(node: Node):
    from . import constructors as C

    try:
        if isinstance(node, Product):
            return C.direct_product(_eval_cached(node.left), _eval_cached(node.right))
        if isinstance(node, Power):
            return C.direct_power(_eval_cached(node.base), node.k)
        a = node.args
        k = node.kind
        if k == "cyclic":
            return C.cyclic(a[0])
        if k == "dihedral":
            return C.dihedral(a[0])
        if k == "ea":
            return C.elem_abelian(a[0], a[1])
        if k == "dic":
            return C.dicyclic(_eval_cached(a[0]))
        if k == "sdp":
            K = _eval_cached(a[0])
            return C.semidirect_product(K, _resolve_aut(K, a[1]), a[2])
        if k == "builtin":
            return C.builtin(a[0])
        if k == "perm":
            degree = 1 + max(v for gen in a[0] for cyc in gen for v in cyc)
            return C.perm_group([C.perm_from_cycles(gen, degree) for gen in a[0]])
        if k == "su3":
            return C.su3_sylow2(a[0])
        if k == "u":
            return C.u_group(a[0])
        if k == "famA":
            return C.family_a(a[0], a[1])
        if k == "famB":
            return C.family_b(_eval_cached(a[0]), None, a[1])
        if k == "famC":
            return C.family_c(a[0])
        if k == "famD":
            return C.family_d(a[0], a[1])
    except EvalError:
        raise
    except GroupError as err:
        raise EvalError(f"{print_recipe(node)}: {type(err).__name__}: {err}") from err
    raise EvalError(f"unknown recipe node {node!r}")


def _resolve_aut(K, ref: AutRef):
    from .constructors import inversion_automorphism
    from .morphisms import AutomorphismMap, automorphism_from_images

    if ref.kind == "id":
        return AutomorphismMap.identity(K)
    if ref.kind == "inv":
        return inversion_automorphism(K)
    if ref.kind == "gens":
        return automorphism_from_images(K, ref.src, ref.dst)
    return AutomorphismMap(K, list(ref.dst))


__all__ = [
    "Call", "Product", "Power", "AutRef", "Node", "SIGNATURES", "tokenize",
    "parse_recipe", "print_recipe", "eval_recipe",
]
