"""Command-line frontend.

Verbs mirror the library: ``fgl`` (check, inverse, transport), ``group``
(mul, inv, pow, conj, quotient), ``word`` (eval, series, image), ``atlas``
(validate, wordmap, marginal), ``probe`` and ``sample-data``.

Laws are referenced either by a JSON file path or by a catalogue name
(additive, multiplicative, heisenberg) together with ring flags.  JSON
output is canonical: sorted keys, two-space indent, graded-lex term order,
trailing newline, so identical inputs give byte-identical bytes.

Exit codes: 0 success, 1 a domain check failed or input data was invalid
(diagnostic on stderr or a failing report on stdout), 2 usage errors and
unreadable inputs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .atlas import (
    check_marginality,
    coset_word_series,
    cyclic_table,
    direct_product,
    extension_from_json,
    extension_to_json,
    inversion_extension,
    validate_transversal,
)
from .fgl import BUILTIN_LAWS, builtin, law_from_json, law_series_from_json, make_law, verify
from .rings import (
    PrecisionReduction,
    RingSpec,
    eqchar,
    nested,
    padic,
    parse_coefficient,
    residue_map,
)
from .series import Series, SeriesTuple
from .specialise import Specialisation, concision_probe, ideal_grid
from .stdgrp import StandardGroup
from .words import marginal_subgroup, parse_word, verbal_subgroup, word_image, word_series


class _Usage(Exception):
    """Flag combinations argparse cannot express; mapped to exit code 2."""


def canonical_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(args, payload: dict, text_lines) -> None:
    if args.format == "json":
        sys.stdout.write(canonical_json(payload))
    else:
        sys.stdout.write("\n".join(text_lines) + "\n")


def _series_lines(prefix: str, T: SeriesTuple) -> list[str]:
    return [f"{prefix}{i + 1} = {s}" for i, s in enumerate(T.components)]


# --------------------------------------------------------------------------
# shared loading helpers


def _spec_from_args(args) -> RingSpec:
    base = padic(args.p, args.K) if args.ring == "p-adic" else eqchar(args.p, args.K)
    if args.m is None:
        return base
    if args.Dt is None:
        raise _Usage("--m needs --Dt")
    return nested(base, args.m, args.Dt)


def _read_json(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _load_law(args, ref: str):
    if ref in BUILTIN_LAWS:
        return builtin(ref, _spec_from_args(args), args.D, dim=args.dim)
    return law_from_json(_read_json(ref))


def _load_group(args) -> StandardGroup:
    if getattr(args, "group", None):
        obj = _read_json(args.group)
        return StandardGroup(law_from_json(obj["law"]), obj["N"])
    if getattr(args, "law", None):
        return StandardGroup(_load_law(args, args.law), args.N)
    raise _Usage("one of --group or --law is required")


def _parse_element(group: StandardGroup, text: str):
    return group.element([c.strip() for c in text.split(",")])


def _load_extension(args):
    return extension_from_json(_read_json(args.extension))


# --------------------------------------------------------------------------
# fgl


def _law_series_from_ref(args, ref: str) -> SeriesTuple:
    if ref in BUILTIN_LAWS:
        return builtin(ref, _spec_from_args(args), args.D, dim=args.dim).F
    return law_series_from_json(_read_json(ref))


def cmd_fgl_check(args) -> int:
    report = verify(_law_series_from_ref(args, args.law_ref))
    lines = [f"{c.name}: " + ("ok" if c.ok else f"FAIL ({c.witness})")
             for c in report.checks]
    lines.append("law: " + ("PASS" if report.ok else "FAIL"))
    _emit(args, report.to_json(), lines)
    return 0 if report.ok else 1


def cmd_fgl_inverse(args) -> int:
    law = make_law(_law_series_from_ref(args, args.law_ref))
    _emit(args, law.to_json(), _series_lines("I", law.I))
    return 0


def _transport_map(args, spec: RingSpec):
    chosen = [x for x in (args.point, args.residue or None, args.precision) if x]
    if len(chosen) != 1:
        raise _Usage("exactly one of --point, --residue, --precision is required")
    if args.point:
        return Specialisation(spec, [q.strip() for q in args.point.split(",")])
    if args.residue:
        return residue_map(spec)
    parts = [int(x) for x in args.precision.split(",")]
    if len(parts) == 1:
        return PrecisionReduction(spec, parts[0])
    if len(parts) == 2:
        return PrecisionReduction(spec, parts[0], parts[1])
    raise _Usage("--precision takes K or K,Dt")


def cmd_fgl_transport(args) -> int:
    law = _load_law(args, args.law_ref)
    out = law.map_coefficients(_transport_map(args, law.spec))
    lines = [f"spec: {out.spec.to_json()}"]
    lines += _series_lines("F", out.F) + _series_lines("I", out.I)
    _emit(args, out.to_json(), lines)
    return 0


# --------------------------------------------------------------------------
# group


def _element_payload(el) -> dict:
    return {"coords": [str(c) for c in el.coords]}


def cmd_group_mul(args) -> int:
    g = _load_group(args)
    out = g.mul(_parse_element(g, args.x), _parse_element(g, args.y))
    _emit(args, _element_payload(out), [str(out)])
    return 0


def cmd_group_inv(args) -> int:
    g = _load_group(args)
    out = g.inv(_parse_element(g, args.x))
    _emit(args, _element_payload(out), [str(out)])
    return 0


def cmd_group_pow(args) -> int:
    g = _load_group(args)
    out = g.power(_parse_element(g, args.x), args.n)
    _emit(args, _element_payload(out), [str(out)])
    return 0


def cmd_group_conj(args) -> int:
    g = _load_group(args)
    C = g.conj_series(_parse_element(g, args.g))
    payload = {"spec": g.law.spec.to_json(), "d": g.d, "D": g.law.D, "C": C.to_json()}
    _emit(args, payload, _series_lines("C", C))
    return 0


def cmd_group_quotient(args) -> int:
    g = _load_group(args)
    q = g.quotient(args.M, args.bound)
    payload = {
        "M": args.M,
        "size": len(q),
        "elements": [[str(c) for c in el] for el in q.elements],
    }
    lines = [f"size: {len(q)}"]
    lines += ["(" + ", ".join(str(c) for c in el) + ")" for el in q.elements]
    _emit(args, payload, lines)
    return 0


# --------------------------------------------------------------------------
# word


def cmd_word_eval(args) -> int:
    g = _load_group(args)
    w = parse_word(args.word)
    points = [_parse_element(g, part) for part in args.args.split(";")]
    out = w.evaluate(g, points)
    _emit(args, _element_payload(out), [str(out)])
    return 0


def cmd_word_series(args) -> int:
    law = _load_law(args, args.law)
    w = parse_word(args.word)
    ws = word_series(w, law)
    payload = {
        "word": w.text(),
        "k": w.k,
        "d": law.d,
        "D": law.D,
        "spec": law.spec.to_json(),
        "W": ws.W.to_json(),
    }
    _emit(args, payload, _series_lines("W", ws.W))
    return 0


def cmd_word_image(args) -> int:
    g = _load_group(args)
    w = parse_word(args.word)
    q = g.quotient(args.M, args.bound)
    fn = {"none": word_image, "verbal": verbal_subgroup, "marginal": marginal_subgroup}
    out = fn[args.closure](w, q, args.bound)
    ordered = sorted(out, key=lambda el: tuple(c.sort_key() for c in el))
    payload = {
        "word": w.text(),
        "M": args.M,
        "closure": args.closure,
        "size": len(ordered),
        "elements": [[str(c) for c in el] for el in ordered],
    }
    lines = [f"size: {len(ordered)}"]
    lines += ["(" + ", ".join(str(c) for c in el) + ")" for el in ordered]
    _emit(args, payload, lines)
    return 0


# --------------------------------------------------------------------------
# atlas


def cmd_atlas_validate(args) -> int:
    data = _load_extension(args)
    report = validate_transversal(data, level=args.level, samples=args.samples,
                                  seed=args.seed, bound=args.bound)
    lines = [f"mode: {report.mode}", f"checked: {report.checked}",
             "ok: " + ("true" if report.ok else "false")]
    lines += [f"failure: {f}" for f in report.failures]
    _emit(args, report.to_json(), lines)
    return 0 if report.ok else 1


def cmd_atlas_wordmap(args) -> int:
    data = _load_extension(args)
    w = parse_word(args.word)
    cosets = tuple(t.strip() for t in args.cosets.split(","))
    cs = coset_word_series(w, data, cosets)
    payload = {
        "word": w.text(),
        "cosets": list(cs.cosets),
        "target": cs.target,
        "W": cs.W.to_json(),
    }
    _emit(args, payload, [f"target: {cs.target}"] + _series_lines("W", cs.W))
    return 0


def cmd_atlas_marginal(args) -> int:
    data = _load_extension(args)
    w = parse_word(args.word)
    rep = check_marginality(w, data, args.bound)
    if rep.all_constant:
        lines = ["all-constant: true", f"image-bound: {rep.image_bound}"]
        for r in rep.rows:
            cs = ", ".join(r.cosets)
            vals = ", ".join(str(c) for c in r.constants)
            lines.append(f"cosets ({cs}) -> {r.target}: ({vals})")
    else:
        lines = ["all-constant: false",
                 "witness-cosets: (" + ", ".join(rep.witness_cosets) + ")",
                 f"witness: {rep.witness}"]
    _emit(args, rep.to_json(), lines)
    return 0


# --------------------------------------------------------------------------
# probe


def cmd_probe(args) -> int:
    data = _load_extension(args)
    w = parse_word(args.word)
    grid = ideal_grid(data.L.law.spec, args.grid_depth)
    report = concision_probe(w, data, args.lmax, grid, args.bound)
    lines = [f"word: {w.text()}", f"lmax: {args.lmax}"]
    for i, pt in enumerate(report.grid):
        lines.append(f"grid[{i}] = (" + ", ".join(str(q) for q in pt) + ")")
    for lv in report.levels:
        if lv.status == "witness":
            cs = ", ".join(lv.witness_cosets)
            lines.append(f"l={lv.l}: witness {lv.witness} at cosets ({cs})")
        else:
            van = ", ".join(str(i) for i in lv.vanishing)
            flag = "trivial" if lv.trivial else "non-trivial"
            lines.append(f"l={lv.l}: constant, {flag}, vanishing grid indices [{van}]")
    lines.append(f"min_l: {report.min_l if report.min_l is not None else 'none'}")
    _emit(args, report.to_json(), lines)
    return 0


# --------------------------------------------------------------------------
# sample data


def _broken_law_json() -> dict:
    spec = padic(2, 4)
    x = Series.variable(spec, 2, 4, 0)
    y = Series.variable(spec, 2, 4, 1)
    F = SeriesTuple.of(x + y + x * x)
    return {"d": 1, "D": 4, "spec": spec.to_json(), "F": F.to_json()}


def _deformed_law_json() -> dict:
    spec = nested(padic(2, 4), 1, 3)
    x = Series.variable(spec, 2, 5, 0)
    y = Series.variable(spec, 2, 5, 1)
    t1 = parse_coefficient(spec, "t1")
    law = make_law(SeriesTuple.of(x + y + (x * y).scale(t1)))
    return law.to_json()


def _sample_objects() -> dict:
    add_law = builtin("additive", padic(2, 4), 4)
    heis = builtin("heisenberg", padic(2, 5), 5)
    inv2 = inversion_extension(
        StandardGroup(builtin("additive", nested(eqchar(2, 3), 1, 3), 4), 1))
    inv3 = inversion_extension(
        StandardGroup(builtin("additive", nested(padic(3, 3), 1, 3), 4), 1))
    # D = 7 = zero valuation of the nested ring, so the truncated inverse
    # series is exact at full precision and sampled validation is sound
    dirp = direct_product(
        StandardGroup(builtin("multiplicative", nested(padic(2, 4), 1, 4), 7), 1),
        cyclic_table(2))
    return {
        "additive.json": add_law.to_json(),
        "heisenberg.json": heis.to_json(),
        "heisenberg_group.json": {"law": heis.to_json(), "N": 1},
        "broken.json": _broken_law_json(),
        "mult_deformed.json": _deformed_law_json(),
        "inversion_p2.json": extension_to_json(inv2),
        "inversion_p3.json": extension_to_json(inv3),
        "dirprod.json": extension_to_json(dirp),
    }


def cmd_sample_data(args) -> int:
    os.makedirs(args.dir, exist_ok=True)
    for name, obj in sorted(_sample_objects().items()):
        path = os.path.join(args.dir, name)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(canonical_json(obj))
        sys.stdout.write(f"wrote {path}\n")
    return 0


# --------------------------------------------------------------------------
# parser


def _add_format(p) -> None:
    p.add_argument("--format", choices=("text", "json"), default="text")


def _add_law_opts(p) -> None:
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--K", type=int, default=4)
    p.add_argument("--ring", choices=("p-adic", "eq-char"), default="p-adic")
    p.add_argument("--D", type=int, default=4)
    p.add_argument("--dim", type=int, default=1)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--Dt", type=int, default=None)


def _add_group_opts(p) -> None:
    p.add_argument("--group", help="group JSON file")
    p.add_argument("--law", help="law JSON file or catalogue name")
    p.add_argument("--N", type=int, default=1)
    _add_law_opts(p)


def _add_bound(p) -> None:
    p.add_argument("--bound", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prostd",
        description="formal group laws and standard groups over truncated rings")
    top = parser.add_subparsers(dest="cmd", required=True)

    fgl = top.add_parser("fgl", help="formal group laws").add_subparsers(
        dest="sub", required=True)
    p = fgl.add_parser("check", help="verify the law axioms symbolically")
    p.add_argument("law_ref", metavar="LAW")
    _add_law_opts(p)
    _add_format(p)
    p.set_defaults(func=cmd_fgl_check)
    p = fgl.add_parser("inverse", help="compute the formal inverse")
    p.add_argument("law_ref", metavar="LAW")
    _add_law_opts(p)
    _add_format(p)
    p.set_defaults(func=cmd_fgl_inverse)
    p = fgl.add_parser("transport", help="apply a coefficient map to a law")
    p.add_argument("law_ref", metavar="LAW")
    p.add_argument("--point", help="comma-separated base coefficients for t1..tm")
    p.add_argument("--residue", action="store_true", help="reduce mod p")
    p.add_argument("--precision", help="new K, or K,Dt for nested rings")
    _add_law_opts(p)
    _add_format(p)
    p.set_defaults(func=cmd_fgl_transport)

    grp = top.add_parser("group", help="standard group arithmetic").add_subparsers(
        dest="sub", required=True)
    p = grp.add_parser("mul")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    _add_group_opts(p)
    _add_format(p)
    p.set_defaults(func=cmd_group_mul)
    p = grp.add_parser("inv")
    p.add_argument("--x", required=True)
    _add_group_opts(p)
    _add_format(p)
    p.set_defaults(func=cmd_group_inv)
    p = grp.add_parser("pow")
    p.add_argument("--x", required=True)
    p.add_argument("--n", type=int, required=True)
    _add_group_opts(p)
    _add_format(p)
    p.set_defaults(func=cmd_group_pow)
    p = grp.add_parser("conj", help="conjugation series of a group element")
    p.add_argument("--g", required=True)
    _add_group_opts(p)
    _add_format(p)
    p.set_defaults(func=cmd_group_conj)
    p = grp.add_parser("quotient", help="enumerate the level-M quotient")
    p.add_argument("--M", type=int, required=True)
    _add_group_opts(p)
    _add_bound(p)
    _add_format(p)
    p.set_defaults(func=cmd_group_quotient)

    wrd = top.add_parser("word", help="word maps").add_subparsers(dest="sub", required=True)
    p = wrd.add_parser("eval", help="evaluate a word at group elements")
    p.add_argument("--word", required=True)
    p.add_argument("--args", required=True,
                   help="semicolon-separated elements, comma-separated coordinates")
    _add_group_opts(p)
    _add_format(p)
    p.set_defaults(func=cmd_word_eval)
    p = wrd.add_parser("series", help="symbolic word-map series")
    p.add_argument("--word", required=True)
    p.add_argument("--law", required=True, help="law JSON file or catalogue name")
    _add_law_opts(p)
    _add_format(p)
    p.set_defaults(func=cmd_word_series)
    p = wrd.add_parser("image", help="word image in a finite quotient")
    p.add_argument("--word", required=True)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--closure", choices=("none", "verbal", "marginal"), default="none")
    _add_group_opts(p)
    _add_bound(p)
    _add_format(p)
    p.set_defaults(func=cmd_word_image)

    atl = top.add_parser("atlas", help="transversal extensions").add_subparsers(
        dest="sub", required=True)
    p = atl.add_parser("validate", help="check the extension group axioms")
    p.add_argument("--extension", required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--level", type=int, default=None)
    mode.add_argument("--samples", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    _add_bound(p)
    _add_format(p)
    p.set_defaults(func=cmd_atlas_validate)
    p = atl.add_parser("wordmap", help="word-map series on fixed cosets")
    p.add_argument("--word", required=True)
    p.add_argument("--extension", required=True)
    p.add_argument("--cosets", required=True, help="comma-separated coset labels")
    _add_format(p)
    p.set_defaults(func=cmd_atlas_wordmap)
    p = atl.add_parser("marginal", help="constancy over all coset tuples")
    p.add_argument("--word", required=True)
    p.add_argument("--extension", required=True)
    _add_bound(p)
    _add_format(p)
    p.set_defaults(func=cmd_atlas_marginal)

    p = top.add_parser("probe", help="search for l with w^l trivial")
    p.add_argument("--word", required=True)
    p.add_argument("--extension", required=True)
    p.add_argument("--lmax", type=int, required=True)
    p.add_argument("--grid-depth", type=int, required=True, dest="grid_depth")
    _add_bound(p)
    _add_format(p)
    p.set_defaults(func=cmd_probe)

    p = top.add_parser("sample-data", help="write example JSON inputs")
    p.add_argument("dir")
    p.set_defaults(func=cmd_sample_data)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Usage as e:
        sys.stderr.write(f"error: usage: {e}\n")
        return 2
    except json.JSONDecodeError as e:
        sys.stderr.write(f"error: JSONDecodeError: {e}\n")
        return 2
    except OSError as e:
        sys.stderr.write(f"error: {type(e).__name__}: {e}\n")
        return 2
    except ValueError as e:
        sys.stderr.write(f"error: {type(e).__name__}: {e}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
