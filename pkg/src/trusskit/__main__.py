"""A cli entry point.

Exit status is 0 on success, 2 when a structure fails validation and 3 on a
usage error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from abc import ABC, abstractmethod
from dataclasses import dataclass
from pathlib import Path
from typing import ClassVar, NoReturn, Sequence
from typing_extensions import override

import pandas as pd

from trusskit.config import Settings, get_settings, use_settings
from trusskit.constructions import (
    alpha_truss,
    constant_truss,
    endo_pair_truss,
    endomorphism_truss,
    mapping_truss,
    matrix_truss,
    semidirect_truss,
)
from trusskit.document import StructureDocument, load, save
from trusskit.errors import (
    AxiomError,
    BadArguments,
    ParseError,
    TrussKitError,
    UnknownCommand,
)
from trusskit.heap import FiniteHeap, HeapMorphism, SubHeap
from trusskit.module import TrussModule, hom_set, induced_action, quotient_module
from trusskit.report import Report, render_table, yes_no
from trusskit.truss import (
    FLAGS,
    FiniteTruss,
    TrussMorphism,
    brace_view,
    classify_subheap,
    enumerate_substructures,
    quotient_truss,
    special_elements,
)
from trusskit.ztruss import (
    ZAuto,
    ZTrussParams,
    apply_word,
    are_isomorphic,
    canonicalize,
    classify_special,
    commutative_parameters,
    oracle_parameters,
    type3_structures,
    zn_enumerate_all,
    zn_truss,
)

logger = logging.getLogger(__name__)


class _Parser(argparse.ArgumentParser):
    @override
    def error(self, message: str) -> NoReturn:
        raise BadArguments(message)


def ints(s: str) -> list[int]:
    """`"1,3"` as `[1, 3]`."""
    try:
        return [int(v) for v in s.split(",") if v.strip()]
    except ValueError as e:
        raise BadArguments(f"Expected comma separated integers, got {s!r}") from e


def triple(s: str) -> tuple[int, int, int]:
    values = ints(s)
    if len(values) != 3:
        raise BadArguments(f"Expected a,b,c, got {s!r}")
    return (values[0], values[1], values[2])


def auto(s: str) -> ZAuto:
    """`"3,+"` or `"-1,-"` as an automorphism of the integers."""
    k, _, sign = s.partition(",")
    if sign not in ("+", "-", "1", "-1"):
        raise BadArguments(f"Expected k,sign with sign + or -, got {s!r}")
    try:
        return ZAuto(int(k), -1 if sign in ("-", "-1") else 1)
    except ValueError as e:
        raise BadArguments(f"Expected an integer k, got {k!r}") from e


def resolve_carrier(s: str) -> FiniteHeap:
    """`"cyclic:2x2"` for `ℤ₂ × ℤ₂`, anything else is a heap document path.

    Called from `do()` so that the active settings bound the carrier.
    """
    if s.startswith("cyclic:"):
        try:
            shape = [int(v) for v in s[len("cyclic:") :].split("x")]
        except ValueError as e:
            raise BadArguments(f"Expected cyclic:n1xn2..., got {s!r}") from e
        return FiniteHeap.from_cyclic(shape)

    doc = load(s)
    if not isinstance(doc.obj, FiniteHeap):
        raise BadArguments(f"{s} holds a {doc.kind}, not a heap")
    return doc.obj


def matrix(s: str) -> list[list[int]]:
    """`"1,0;0,0"` as a matrix, rows split by `;`."""
    return [ints(row) for row in s.split(";")]


def _expect(doc: StructureDocument, *types: type) -> None:
    if not isinstance(doc.obj, types):
        names = " or ".join(t.__name__ for t in types)
        raise BadArguments(f"{doc.path} holds a {doc.kind}, expected a {names}")


def _members(S: SubHeap) -> str:
    return "{" + ",".join(str(m) for m in S.members) + "}"


def _none(value: object) -> str:
    if isinstance(value, tuple):
        return "{" + ",".join(str(v) for v in value) + "}" if value else "none"
    return "none" if value is None else str(value)


def _with_out(
    report: Report,
    obj: FiniteTruss | TrussModule,
    out: Path | None,
    labels: Sequence[str] | None = None,
) -> Report:
    table = render_table(obj, labels)
    report.add(table, table=table)
    if out is not None:
        save(obj, out, labels if isinstance(obj, FiniteTruss) else None)
        report.add(f"saved: {out}", saved=str(out))
    return report


@dataclass
class CommandHandler(ABC):
    """A handler for a command."""

    name: ClassVar[str]
    help: ClassVar[str]

    @classmethod
    @abstractmethod
    def do(cls, args: argparse.Namespace) -> Report:
        """Handle the command."""
        ...

    @classmethod
    @abstractmethod
    def fill_parser(cls, parser: argparse.ArgumentParser) -> argparse.ArgumentParser:
        """Parser for the command."""
        ...

    @classmethod
    def get(cls) -> list[type[CommandHandler]]:
        """Get all the handlers."""
        return cls.__subclasses__()


class VerifyHandler(CommandHandler):
    name = "verify"
    help = "Validate a structure document and summarise it."

    @override
    @classmethod
    def do(cls, args: argparse.Namespace) -> Report:
        doc = load(args.path)
        report = Report(cls.name)
        obj = doc.obj
        if isinstance(obj, FiniteTruss):
            s = special_elements(obj)
            report.add(
                f"truss: valid; identity: {_none(s.identity)};"
                f" absorber: {_none(s.absorber)};"
                f" right-braceable: {yes_no(s.right_braceable)}",
                kind="truss",
                identity=s.identity,
                absorber=s.absorber,
                central=s.central,
                left_braceable=s.left_braceable,
                right_braceable=s.right_braceable,
            )
        elif isinstance(obj, FiniteHeap):
            report.add(f"heap: valid; size: {obj.size}", kind="heap", size=obj.size)
        elif isinstance(obj, TrussModule):
            report.add(
                f"module: valid; size: {obj.size};"
                f" normalised: {yes_no(obj.normalised)}",
                kind="module",
                size=obj.size,
                normalised=obj.normalised,
            )
        elif isinstance(obj, (HeapMorphism, TrussMorphism)):
            report.add(
                f"morphism: valid; bijective: {yes_no(obj.is_bijective)}",
                kind="morphism",
                bijective=obj.is_bijective,
            )
        else:
            assert isinstance(obj, ZTrussParams)
            canonical, _ = canonicalize(obj)
            report.add(
                f"zparams: valid; canonical: {canonical}",
                kind="zparams",
                canonical=str(canonical),
            )
        return report

    @override
    @classmethod
    def fill_parser(cls, parser: argparse.ArgumentParser) -> argparse.ArgumentParser:
        parser.add_argument("path", type=Path, help="The structure document")
        return parser


class EnumerateHandler(CommandHandler):
    name = "enumerate"
    help = "List the sub-heaps of a truss of a given kind."

    @override
    @classmethod
    def do(cls, args: argparse.Namespace) -> Report:
        doc = load(args.path)
        _expect(doc, FiniteTruss)
        assert isinstance(doc.obj, FiniteTruss)
        found = enumerate_substructures(doc.obj, args.kind)
        report = Report(cls.name, findings={args.kind: [S.members for S in found]})
        for S in found:
            report.add(_members(S))
        report.add(f"{len(found)} {args.kind}")
        return report

    @override
    @classmethod
    def fill_parser(cls, parser: argparse.ArgumentParser) -> argparse.ArgumentParser:
        parser.add_argument("path", type=Path, help="A truss document")
        parser.add_argument(
            "--kind",
            choices=[
                "subheaps",
                "paragons",
                "left_paragons",
                "right_paragons",
                "ideals",
                "subtrusses",
            ],
            default="subheaps",
            help="Which sub-structures to list, defaults to all sub-heaps",
        )
        return parser


def _params_from(args: argparse.Namespace) -> ZTrussParams:
    if args.file is not None:
        doc = load(args.file)
        _expect(doc, ZTrussParams)
        assert isinstance(doc.obj, ZTrussParams)
        return doc.obj
    if args.variant in ("left", "right"):
        return ZTrussParams(args.variant)
    if args.params is None:
        raise BadArguments("Give --params a,b,c, --variant or --file")
    return ZTrussParams.commutative(*args.params)


def _add_params_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--params", type=triple, help="The triple a,b,c")
    parser.add_argument(
        "--variant",
        choices=["commutative", "left", "right"],
        default="commutative",
        help="Use left or right for the projection products",
    )
    parser.add_argument("--file", type=Path, help="A zparams document instead")


def _word(word: Sequence[ZAuto]) -> str:
    return " ".join(str(g) for g in word) if word else "identity"


class ClassifyZHandler(CommandHandler):
    name = "classify-z"
    help = "Canonical form, identity and absorber of a truss on the integers."

    @override
    @classmethod
    def do(cls, args: argparse.Namespace) -> Report:
        p = _params_from(args)
        canonical, word = canonicalize(p)
        special = classify_special(p)
        report = Report(cls.name)
        report.add(f"params: {p}", params=str(p))
        report.add(f"canonical: {canonical}", canonical=str(canonical))
        report.add(f"witness: {_word(word)}", witness=[str(g) for g in word])
        report.add(
            f"unital: {yes_no(special.unital)}; identity: {_none(special.identity)}",
            unital=special.unital,
            identity=special.identity,
        )
        report.add(
            f"ring-type: {yes_no(special.ring_type)};"
            f" absorber: {_none(special.absorber)}",
            ring_type=special.ring_type,
            absorber=special.absorber,
        )
        if canonical == ZTrussParams.commutative(1, 0, 0):
            report.add(
                "note: for a = 1 the products mn and mn+m+n are isomorphic",
                note="a=1 merges mn and mn+m+n",
            )
        return report

    @override
    @classmethod
    def fill_parser(cls, parser: argparse.ArgumentParser) -> argparse.ArgumentParser:
        _add_params_arguments(parser)
        return parser


class OrbitHandler(CommandHandler):
    name = "orbit"
    help = "Transport a triple along automorphisms n -> k ± n."

    @override
    @classmethod
    def do(cls, args: argparse.Namespace) -> Report:
        p = _params_from(args)
        word = tuple(args.auto or ())
        q = apply_word(p, word)
        report = Report(cls.name)
        report.add(f"{p} -> {q}", source=str(p), target=str(q))
        report.add(
            f"isomorphic: {yes_no(are_isomorphic(p, q) is not None)}",
            isomorphic=are_isomorphic(p, q) is not None,
        )
        return report

    @override
    @classmethod
    def fill_parser(cls, parser: argparse.ArgumentParser) -> argparse.ArgumentParser:
        _add_params_arguments(parser)
        parser.add_argument(
            "--auto",
            type=auto,
            action="append",
            help="An automorphism k,sign such as 3,+ ; repeat to apply in order",
        )
        return parser


class Type3Handler(CommandHandler):
    name = "type3"
    help = "The products amn + b(m+n) + c with 2 <= b < a."

    @override
    @classmethod
    def do(cls, args: argparse.Namespace) -> Report:
        found = type3_structures(args.a)
        report = Report(cls.name)
        text = " ".join(f"({b},{c})" for b, c in found) or "none"
        report.add(text, structures=found)
        return report

    @override
    @classmethod
    def fill_parser(cls, parser: argparse.ArgumentParser) -> argparse.ArgumentParser:
        parser.add_argument("--a", type=int, required=True, help="The coefficient a")
        return parser


class QuotientHandler(CommandHandler):
    name = "quotient"
    help = "Divide a truss by a paragon or a module by an induced submodule."

    @override
    @classmethod
    def do(cls, args: argparse.Namespace) -> Report:
        doc = load(args.path)
        _expect(doc, FiniteTruss, TrussModule)
        report = Report(cls.name)
        if isinstance(doc.obj, FiniteTruss):
            S = SubHeap.of(doc.obj.heap, args.subheap)
            Q, projection = quotient_truss(doc.obj, S)
        else:
            assert isinstance(doc.obj, TrussModule)
            S = SubHeap.of(doc.obj.heap, args.subheap)
            Q, projection = quotient_module(doc.obj, S)

        report.add(
            f"quotient by {_members(S)}: size {Q.size}",
            size=Q.size,
            projection=projection.image,
        )
        return _with_out(report, Q, args.out)

    @override
    @classmethod
    def fill_parser(cls, parser: argparse.ArgumentParser) -> argparse.ArgumentParser:
        parser.add_argument("path", type=Path, help="A truss or module document")
        parser.add_argument(
            "--subheap",
            type=ints,
            required=True,
            help="The members, comma separated",
        )
        parser.add_argument("--out", type=Path, help="Save the quotient here")
        return parser


class InduceHandler(CommandHandler):
    name = "induce"
    help = "The induced action x ▷ᵉ m = [x ▷ m, x ▷ e, e] of a module."

    @override
    @classmethod
    def do(cls, args: argparse.Namespace) -> Report:
        doc = load(args.path)
        _expect(doc, TrussModule)
        assert isinstance(doc.obj, TrussModule)
        induced = induced_action(doc.obj, args.e)
        report = Report(cls.name)
        report.add(f"induced at {args.e}", basepoint=args.e)
        return _with_out(report, induced, args.out)

    @override
    @classmethod
    def fill_parser(cls, parser: argparse.ArgumentParser) -> argparse.ArgumentParser:
        parser.add_argument("path", type=Path, help="A module document")
        parser.add_argument("--e", type=int, required=True, help="The basepoint")
        parser.add_argument("--out", type=Path, help="Save the module here")
        return parser


class EndoTrussHandler(CommandHandler):
    name = "endotruss"
    help = "The truss of all heap endomorphisms, or its semi-direct product form."

    @override
    @classmethod
    def do(cls, args: argparse.Namespace) -> Report:
        H = resolve_carrier(args.carrier)
        report = Report(cls.name)
        if args.semidirect:
            product = semidirect_truss(H, args.e)
            T, labels = product.truss, [str(label) for label in product.labels]
            report.add(
                f"H ⋊ End(H, +_{args.e}): {T.size} elements; Θ: isomorphism onto E(H)",
                size=T.size,
                theta=product.theta.image,
            )
        else:
            T, endos = endomorphism_truss(H)
            labels = [str(label) for label in endos]
            report.add(f"E(H): {T.size} elements", size=T.size)
        report.findings["labels"] = labels
        return _with_out(report, T, args.out, labels)

    @override
    @classmethod
    def fill_parser(cls, parser: argparse.ArgumentParser) -> argparse.ArgumentParser:
        parser.add_argument(
            "--carrier",
            required=True,
            help="cyclic:n1xn2... or a heap document",
        )
        parser.add_argument(
            "--semidirect",
            action="store_true",
            help="Build H ⋊ End(H, +_e) and check it against E(H)",
        )
        parser.add_argument("--e", type=int, default=0, help="The basepoint")
        parser.add_argument("--out", type=Path, help="Save the truss here")
        return parser


class ZnEnumerateHandler(CommandHandler):
    name = "zn-enumerate"
    help = "Every truss product on the cyclic heap of order n."

    @override
    @classmethod
    def do(cls, args: argparse.Namespace) -> Report:
        found = zn_enumerate_all(args.n)
        report = Report(cls.name)
        report.add(f"ℤ_{args.n}: {len(found)} truss products", count=len(found))
        rows = []
        for i, T in enumerate(found):
            oracle = oracle_parameters(T)
            params = commutative_parameters(T)
            kind = "non-commutative" if params is None else f"(a,b,c)={params}"
            report.add(f"{i}: (α,β,γ,δ)={oracle} {kind}")
            rows.append({"oracle": oracle, "commutative": params})
            if args.out is not None:
                args.out.mkdir(parents=True, exist_ok=True)
                save(T, args.out / f"z{args.n}_{i:03d}.yaml")
        report.findings["trusses"] = rows
        return report

    @override
    @classmethod
    def fill_parser(cls, parser: argparse.ArgumentParser) -> argparse.ArgumentParser:
        parser.add_argument("--n", type=int, required=True, help="The modulus")
        parser.add_argument("--out", type=Path, help="A directory to save each truss")
        return parser


class ReportHandler(CommandHandler):
    name = "report"
    help = "Everything known about a truss: special elements, braces, sub-heaps."

    @override
    @classmethod
    def do(cls, args: argparse.Namespace) -> Report:
        doc = load(args.path)
        _expect(doc, FiniteTruss)
        T = doc.obj
        assert isinstance(T, FiniteTruss)
        s = special_elements(T)
        report = Report(cls.name)
        report.add(render_table(T, doc.labels), table=render_table(T, doc.labels))
        report.add(
            f"size: {T.size}; commutative: {yes_no(T.is_commutative)}",
            size=T.size,
            commutative=T.is_commutative,
        )
        for name in (
            "identity",
            "absorber",
            "central",
            "idempotents",
            "left_identities",
            "right_identities",
            "left_absorbers",
            "right_absorbers",
        ):
            value = getattr(s, name)
            report.add(f"{name}: {_none(value)}", **{name: value})

        brace = brace_view(T)
        if brace is not None:
            report.add(
                f"brace: yes; two-sided: {yes_no(brace.is_group)}",
                brace=True,
                two_sided_brace=brace.is_group,
            )

        rows = {}
        for S in enumerate_substructures(T, "subheaps"):
            flags = classify_subheap(T, S).flags
            rows[_members(S)] = {k: yes_no(flags[k]) for k in FLAGS[1:]}
        df = pd.DataFrame.from_dict(rows, orient="index", columns=list(FLAGS[1:]))
        report.add(df.to_string(), substructures=rows)
        return report

    @override
    @classmethod
    def fill_parser(cls, parser: argparse.ArgumentParser) -> argparse.ArgumentParser:
        parser.add_argument("path", type=Path, help="A truss document")
        return parser


class HomSetHandler(CommandHandler):
    name = "homset"
    help = "Every module morphism between two modules over one truss."

    @override
    @classmethod
    def do(cls, args: argparse.Namespace) -> Report:
        docs = [load(args.domain), load(args.codomain)]
        for doc in docs:
            _expect(doc, TrussModule)
        M, N = (doc.obj for doc in docs)
        assert isinstance(M, TrussModule)
        assert isinstance(N, TrussModule)
        homs = hom_set(M, N)
        report = Report(cls.name)
        count = len(homs.morphisms)
        report.add(f"{count} module morphisms", count=count)
        images = [tuple(int(i) for i in phi.image) for phi in homs.morphisms]
        for image in images:
            report.add(str(image))
        report.findings["morphisms"] = images
        return report

    @override
    @classmethod
    def fill_parser(cls, parser: argparse.ArgumentParser) -> argparse.ArgumentParser:
        parser.add_argument("domain", type=Path, help="The domain module document")
        parser.add_argument("codomain", type=Path, help="The codomain module document")
        return parser


class ConstructHandler(CommandHandler):
    name = "construct"
    help = "Build a truss from one of the standard constructions."

    @override
    @classmethod
    def do(cls, args: argparse.Namespace) -> Report:
        needs = {
            "constant": ("carrier",),
            "alpha": ("carrier", "alpha"),
            "endo-pair": ("carrier", "alpha"),
            "mapping": ("truss",),
            "matrix": ("matrix",),
            "zn": ("params",),
        }
        for option in needs.get(args.construction, ()):
            if getattr(args, option) is None:
                raise BadArguments(f"{args.construction} needs --{option}")

        if args.construction == "constant":
            T = constant_truss(resolve_carrier(args.carrier), args.e)
        elif args.construction == "alpha":
            H = resolve_carrier(args.carrier)
            T = alpha_truss(H, args.alpha, args.variant)
        elif args.construction == "endo-pair":
            H = resolve_carrier(args.carrier)
            T = endo_pair_truss(H, args.alpha, args.a, args.variant)
        elif args.construction == "mapping":
            doc = load(args.truss)
            _expect(doc, FiniteTruss)
            assert isinstance(doc.obj, FiniteTruss)
            T = mapping_truss(doc.obj, args.x_size)
        elif args.construction == "matrix":
            T = matrix_truss(args.m, args.k, args.matrix)
        elif args.construction == "zn":
            T = zn_truss(args.m, *args.params)
        else:
            raise UnknownCommand(f"Unknown construction {args.construction!r}")

        report = Report(cls.name)
        report.add(f"{args.construction}: {T.size} elements", size=T.size)
        return _with_out(report, T, args.out)

    @override
    @classmethod
    def fill_parser(cls, parser: argparse.ArgumentParser) -> argparse.ArgumentParser:
        parser.add_argument(
            "construction",
            choices=["constant", "alpha", "endo-pair", "mapping", "matrix", "zn"],
            help="The construction",
        )
        parser.add_argument("--carrier", help="cyclic:n1xn2... or a heap document")
        parser.add_argument("--e", type=int, default=0, help="The absorbing element")
        parser.add_argument("--alpha", type=ints, help="Images of the endomorphism")
        parser.add_argument("--a", type=int, default=0, help="An element of ker α")
        parser.add_argument(
            "--variant",
            choices=["first", "second"],
            default="first",
            help="Which of the two products",
        )
        parser.add_argument("--truss", type=Path, help="A truss document")
        parser.add_argument("--x-size", type=int, default=1, help="Size of the domain")
        parser.add_argument("--m", type=int, default=2, help="The modulus")
        parser.add_argument("--k", type=int, default=1, help="The dimension")
        parser.add_argument("--matrix", type=matrix, help="Rows split by ;")
        parser.add_argument("--params", type=triple, help="a,b,c for zn")
        parser.add_argument("--out", type=Path, help="Save the truss here")
        return parser


def _settings(args: argparse.Namespace) -> Settings:
    settings = Settings.from_file(args.config) if args.config else get_settings()
    if args.max_carrier is not None:
        settings = settings.mutate(
            max_carrier=args.max_carrier,
            enumeration_cap=args.max_carrier,
        )
    return settings


def main(argv: Sequence[str] | None = None) -> int:
    """The main entry point."""
    prog = "python -m trusskit"
    parser = _Parser(
        prog=prog,
        formatter_class=argparse.RawTextHelpFormatter,
    )
    parser.add_argument("--config", type=Path, help="A yaml or json settings file")
    parser.add_argument(
        "--max-carrier",
        type=int,
        help="Override the largest carrier and the enumeration cap",
    )
    parser.add_argument(
        "--format",
        choices=["text", "json"],
        default="text",
        help="How to print the report",
    )
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="-v for info, -vv for debug logging",
    )
    subparsers = parser.add_subparsers(dest="command")
    handlers = {handler.name: handler for handler in CommandHandler.get()}
    for name, handler in handlers.items():
        line = "-" * len(handler.help) + "\n"
        subparser = subparsers.add_parser(
            name,
            help=f"{prog} {name} --help\n\n{handler.help}\n{line}",
        )
        handler.fill_parser(subparser)

    try:
        args = parser.parse_args(argv)
    except BadArguments as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 3

    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level)

    _handler = handlers.get(args.command)
    if _handler is None:
        parser.print_help()
        return 3

    try:
        with use_settings(_settings(args)):
            report = _handler.do(args)
    except (AxiomError, ParseError) as e:
        report = Report(args.command, status=2)
        report.add(
            f"invalid: {e}",
            error=type(e).__name__,
            witness=list(getattr(e, "witness", ())),
        )
    except (TrussKitError, ValueError) as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 3

    print(report.render(args.format))
    return report.status


if __name__ == "__main__":
    sys.exit(main())
