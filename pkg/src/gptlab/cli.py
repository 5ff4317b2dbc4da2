"""Command line surface.

Exit codes: 0 success, 1 a validation or analysis check failed, 2 input
could not be parsed, 3 a search budget was exhausted (a partial report is
still written).
"""

import argparse
import json
import sys
import time

import numpy as np

from . import composite, dynamics, polygon, reports, scalars, symmetry, systems
from .errors import (GptLabError, InvalidParameter, SearchBudgetExceeded,
                     TooLarge)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_PARSE_ERROR = 2
EXIT_BUDGET = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InvalidParameter(message)


def build_parser():
    p = _Parser(prog="gptlab")
    sub = p.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("system")
    ssub = ps.add_subparsers(dest="subcommand", required=True)
    pb = ssub.add_parser("build")
    pb.add_argument("--kind", required=True,
                    choices=sorted(reports.CATALOG_BUILDERS))
    pb.add_argument("--n", type=int)
    pb.add_argument("--d", type=int)
    pb.add_argument("-o", "--output")
    pc = ssub.add_parser("check")
    pc.add_argument("descriptor")
    pc.add_argument("-o", "--output")

    pm = sub.add_parser("compose")
    pm.add_argument("descriptors", nargs="+")
    pm.add_argument("-o", "--output")

    pa = sub.add_parser("analyze")
    pa.add_argument("descriptor")
    grp = pa.add_mutually_exclusive_group(required=True)
    grp.add_argument("--theorem1", action="store_true")
    grp.add_argument("--enumerate", action="store_true")
    grp.add_argument("--cnot", action="store_true")
    grp.add_argument("--appendix", action="store_true")
    grp.add_argument("--audit-entanglement", action="store_true")
    pa.add_argument("--control", type=int, default=1)
    pa.add_argument("--target", type=int, default=2)
    pa.add_argument("--node-cap", type=int,
                    default=symmetry.DEFAULT_NODE_CAP)
    pa.add_argument("-o", "--output")

    pr = sub.add_parser("report")
    rsub = pr.add_subparsers(dest="subcommand", required=True)
    rs = rsub.add_parser("show")
    rs.add_argument("report")
    return p


def _emit(doc, output):
    text = reports.canonical_dumps(doc)
    if output:
        with open(output, "w") as f:
            f.write(text)
    sys.stdout.write(text)


def _load_descriptor_file(path):
    try:
        return reports.load_descriptor(path)
    except (OSError, json.JSONDecodeError) as e:
        raise InvalidParameter("cannot read descriptor %s: %s" % (path, e))


def _load_composite(path):
    d = _load_descriptor_file(path)
    locs = [reports.system_from_descriptor(x)
            for x in reports.local_descriptors(d)]
    if len(locs) < 2:
        raise InvalidParameter("analysis needs a composite descriptor "
                               "with at least two subsystems")
    return d, composite.compose(locs)


def cmd_system_build(args):
    params = {}
    if args.n is not None:
        params["n"] = args.n
    if args.d is not None:
        params["d"] = args.d
    try:
        s = reports.CATALOG_BUILDERS[args.kind](params)
    except KeyError as e:
        raise InvalidParameter("kind %s needs parameter --%s"
                               % (args.kind, e.args[0]))
    d = reports.descriptor_from_system(s)
    _emit(d, args.output)
    return EXIT_OK


def cmd_system_check(args):
    d = _load_descriptor_file(args.descriptor)
    s = reports.system_from_descriptor(d)
    rep = reports.AnalysisReport(analysis="system-check",
                                 input_hash=reports.content_hash(d),
                                 scalar_mode=s.scalar_mode)
    t0 = time.time()
    vr = systems.validate_system(s)
    for name, ok, _ in vr.checks:
        rep.checks["validate." + name] = ok
    rep.checks["dichotomic"] = systems.is_dichotomic(s)
    dec = systems.reduce(s)
    rep.counts["components"] = dec.n_components
    rep.counts["symmetry_group_order"] = len(symmetry.local_symmetry_group(s))
    rep.add_timing("total", time.time() - t0)
    _emit(rep.to_dict(), args.output)
    # dichotomy and reducibility are findings, not failures
    return EXIT_OK if vr.passed else EXIT_CHECK_FAILED


def cmd_compose(args):
    parts = []
    for path in args.descriptors:
        d = _load_descriptor_file(path)
        parts.extend(reports.local_descriptors(d))
    locs = [reports.system_from_descriptor(x) for x in parts]
    composite.compose(locs)   # raises early if the composite is invalid
    _emit(reports.composite_descriptor(parts), args.output)
    return EXIT_OK


def _analyze_theorem1(c, rep, cfg):
    t0 = time.time()
    tr = dynamics.verify_theorem1(c, cfg)
    rep.add_timing("enumeration", time.time() - t0)
    rep.counts["reversibles"] = tr.enumerated_count
    rep.counts["trivial_group_order"] = tr.trivial_group_order
    rep.checks["all_certified"] = tr.all_certified
    rep.checks["count_matches_trivial_order"] = \
        tr.enumerated_count == tr.trivial_group_order
    rep.checks["passed"] = tr.passed


def _analyze_enumerate(c, rep, cfg):
    t0 = time.time()
    ts = dynamics.enumerate_reversibles(c, cfg)
    rep.add_timing("enumeration", time.time() - t0)
    rep.counts["reversibles"] = len(ts)
    certified = sum(1 for t in ts
                    if dynamics.triviality_certificate(c, t) is not None)
    rep.counts["certified_trivial"] = certified
    rep.checks["all_certified"] = certified == len(ts)


def _analyze_cnot(c, rep, control, target):
    tgt = c.locals[target - 1]
    if tgt.kind == "squashed-gtrit":
        t_local = dynamics.gtrit_flip_symmetry(tgt)
    else:
        group = symmetry.local_symmetry_group(tgt)
        nontrivial = [m for m in group
                      if not scalars.mat_eq(
                          m, scalars.identity_matrix(tgt.dim, tgt.scalar_mode),
                          tgt.scalar_mode, scalars.MATCH_TOL)]
        if not nontrivial:
            from .errors import TargetHasNoSymmetry
            raise TargetHasNoSymmetry("target has only the identity "
                                      "symmetry")
        t_local = nontrivial[0]
    t0 = time.time()
    t = dynamics.build_conditional_cnot(c, control, target, t_local)
    rep.add_timing("construction", time.time() - t0)
    rep.checks["allowed_reversible"] = True    # verified by the builder
    rep.checks["not_adjacency_preserving"] = \
        not dynamics.is_adjacency_preserving(c, t)
    rep.checks["fails_subunit_criterion"] = \
        not dynamics.subunit_criterion(c, t)
    perm = dynamics.effect_permutation(c, t)
    table = []
    for i, p in enumerate(perm):
        table.append([c.effect_label(c.ray_extremes[i]),
                      c.effect_label(c.ray_extremes[p])])
    rep.witnesses["effect_map"] = table
    aud = dynamics.entanglement_audit(c, t)
    rep.checks["permutes_pure_products"] = aud.permutes_pure_products
    rep.checks["no_separable_to_entangled"] = \
        aud.separable_to_entangled_witness is None
    rep.checks["correlating_product_input_exists"] = \
        aud.correlation_witness is not None
    if aud.correlation_witness:
        rep.witness_vector("correlated_input", aud.correlation_witness[0])
        rep.witness_vector("correlated_image", aud.correlation_witness[1])
    return rep


def _analyze_appendix(c, rep, cfg):
    ns = {loc.params.get("n") for loc in c.locals
          if loc.kind == "polygon"}
    if len(ns) != 1 or any(loc.kind != "polygon" for loc in c.locals):
        raise InvalidParameter("appendix analysis needs identical polygon "
                               "subsystems")
    n = ns.pop()
    frames = [polygon.polygon_frame(n) for _ in c.locals]
    rep.counts["polygon_n"] = n
    rep.checks["frame_identity_local"] = polygon.frame_identity_check(
        frames[0])
    rep.checks["frame_identity_composite"] = polygon.frame_identity_check(
        frames)
    t0 = time.time()
    ts = dynamics.enumerate_reversibles(c, cfg)
    rep.add_timing("enumeration", time.time() - t0)
    rep.counts["reversibles"] = len(ts)
    rep.counts["trivial_group_order"] = dynamics.trivial_group_order(c)
    t0 = time.time()
    orth = all(polygon.orthogonality_check(frames, c, t) for t in ts)
    rep.add_timing("orthogonality", time.time() - t0)
    rep.checks["all_orthogonal"] = orth
    t0 = time.time()
    certified = 0
    for t in ts:
        r = polygon.odd_polygon_triviality_check(frames, c, t)
        if r.passed and r.certificate is not None:
            certified += 1
    rep.add_timing("triviality_argument", time.time() - t0)
    rep.counts["certified_trivial"] = certified
    rep.checks["all_certified"] = certified == len(ts)
    rep.checks["count_matches_trivial_order"] = \
        len(ts) == rep.counts["trivial_group_order"]


def _analyze_audit(c, rep, cfg):
    t0 = time.time()
    ts = dynamics.enumerate_reversibles(c, cfg)
    rep.add_timing("enumeration", time.time() - t0)
    rep.counts["reversibles"] = len(ts)
    t0 = time.time()
    bad = 0
    for t in ts:
        aud = dynamics.entanglement_audit(c, t)
        if not aud.permutes_pure_products:
            bad += 1
    rep.add_timing("audit", time.time() - t0)
    rep.counts["non_permuting"] = bad
    rep.checks["all_permute_pure_products"] = bad == 0
    rep.witnesses["note"] = ("every enumerated reversible permuted the "
                             "pure product states; evidence only, not a "
                             "proof")


def cmd_analyze(args):
    d, c = _load_composite(args.descriptor)
    rep = reports.AnalysisReport(
        analysis="analyze", input_hash=reports.content_hash(d),
        scalar_mode=c.mode)
    cfg = dynamics.SearchConfig(node_cap=args.node_cap)
    try:
        if args.theorem1:
            rep.analysis = "theorem1"
            _analyze_theorem1(c, rep, cfg)
        elif args.enumerate:
            rep.analysis = "enumerate"
            _analyze_enumerate(c, rep, cfg)
        elif args.cnot:
            rep.analysis = "conditional-cnot"
            _analyze_cnot(c, rep, args.control, args.target)
        elif args.appendix:
            rep.analysis = "appendix"
            _analyze_appendix(c, rep, cfg)
        else:
            rep.analysis = "entanglement-audit"
            _analyze_audit(c, rep, cfg)
    except SearchBudgetExceeded as e:
        rep.partial = True
        rep.witnesses["budget"] = str(e)
        _emit(rep.to_dict(), args.output)
        return EXIT_BUDGET
    _emit(rep.to_dict(), args.output)
    return EXIT_OK if rep.passed else EXIT_CHECK_FAILED


def cmd_report_show(args):
    try:
        rep = reports.load_report(args.report)
    except (OSError, json.JSONDecodeError, KeyError) as e:
        raise InvalidParameter("cannot read report %s: %s"
                               % (args.report, e))
    print("analysis: %s (tool %s, mode %s)"
          % (rep.analysis, rep.tool_version, rep.scalar_mode))
    print("input hash: %s" % rep.input_hash)
    for name in sorted(rep.checks):
        print("  check %-40s %s" % (name, "PASS" if rep.checks[name]
                                    else "FAIL"))
    for name in sorted(rep.counts):
        print("  count %-40s %d" % (name, rep.counts[name]))
    for name in sorted(rep.timings):
        print("  time  %-40s %ss" % (name, rep.timings[name]))
    if rep.partial:
        print("  PARTIAL: search budget exhausted")
    return EXIT_OK if rep.passed and not rep.partial else EXIT_CHECK_FAILED


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except InvalidParameter as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_PARSE_ERROR
    try:
        if args.command == "system":
            if args.subcommand == "build":
                return cmd_system_build(args)
            return cmd_system_check(args)
        if args.command == "compose":
            return cmd_compose(args)
        if args.command == "analyze":
            return cmd_analyze(args)
        return cmd_report_show(args)
    except InvalidParameter as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_PARSE_ERROR
    except SearchBudgetExceeded as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_BUDGET
    except (GptLabError, TooLarge) as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
