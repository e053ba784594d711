"""The `ats` command line front end.

One job per invocation: parse a config, run the pipeline, print a
human-readable summary, optionally write a machine-readable JSON report
(byte-identical across runs with the same config and seed), and exit 0
exactly when every check passed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from math import gcd

from .classify import (ClassLabel, CycloField, classify_conductor, decide_iso,
                       refute_isomorphism, run_census, witness_isomorphism)
from .config import ConfigError, JobConfig, parse_config
from .constructions import ConstraintError
from .omega import (PRODUCT, TRIPLE, algebra_from_dict, algebra_to_dict,
                    check_grading, check_involution, graded_is_simple,
                    is_simple)
from .triples import (TripleSystem, check_associative, check_at2,
                      direct_sum_triple, loos_envelope, recover_triple,
                      scalar_triple, triple_from, triple_is_simple,
                      zero_triple)

SCHEMA = "atsbench-report-v1"


class Report:
    def __init__(self, command: str, seed: int):
        self.command = command
        self.seed = seed
        self.checks = []
        self.artifacts = {}
        self.work = {"checks_run": 0}
        self.notes = []

    def add_check(self, name: str, passed: bool, detail=None, checked: int = 0):
        self.checks.append({"name": name, "passed": bool(passed),
                            "checked": checked,
                            "detail": detail if detail else ""})
        self.work["checks_run"] += 1

    def add_report(self, rep):
        self.add_check(rep.name, rep.passed,
                       "; ".join(rep.violations[:5]), rep.checked)

    @property
    def status(self) -> str:
        return "pass" if all(c["passed"] for c in self.checks) else "fail"

    def to_dict(self) -> dict:
        return {"schema": SCHEMA, "command": self.command, "seed": self.seed,
                "status": self.status, "checks": self.checks,
                "artifacts": self.artifacts, "work": self.work,
                "notes": self.notes}

    def summary(self) -> str:
        lines = [f"[{self.command}] status: {self.status}"]
        for c in self.checks:
            mark = "ok " if c["passed"] else "FAIL"
            extra = f" -- {c['detail']}" if c["detail"] and not c["passed"] else ""
            lines.append(f"  {mark} {c['name']} ({c['checked']} checks){extra}")
        for n in self.notes:
            lines.append(f"  note: {n}")
        return "\n".join(lines)


def _field_for(label: ClassLabel) -> CycloField:
    # construction jobs run at the session conductor: the lcm of the
    # support element orders (classification jobs double it themselves)
    n = 1
    for e in label.params.full_support.elements:
        o = e.order()
        n = n * o // gcd(n, o)
    return CycloField(n)


def _build_triple(cfg: JobConfig) -> TripleSystem:
    spec = cfg.triple_spec
    source = spec.get("source", "grw" if cfg.label else "builtin")
    if source == "grw":
        if cfg.label is None:
            raise ConfigError("triple source grw needs a [label] section")
        ca = cfg.label.build(_field_for(cfg.label))
        W, _ = triple_from(ca.algebra, ca.grading, label=cfg.label.name)
        return W
    if source == "builtin":
        kind = spec.get("builtin", "scalar")
        dim = int(spec.get("dim", "1"))
        field = CycloField(1)
        if kind == "scalar":
            return scalar_triple(field)
        if kind == "zero":
            return zero_triple(field, dim)
        if kind == "direct_sum":
            return direct_sum_triple(field, max(dim, 2))
        raise ConfigError(f"unknown builtin triple {kind!r}")
    if source == "json":
        with open(spec["file"], encoding="utf-8") as fh:
            alg, grading = algebra_from_dict(json.load(fh))
        return TripleSystem(alg, grading, label=spec["file"])
    raise ConfigError(f"unknown triple source {source!r}")


def _run_division(cfg: JobConfig, report: Report, full: bool):
    from .constructions import (d_inv, exchange_double_division,
                                standard_realization)
    spec = cfg.division_spec
    T, beta, tau, t = spec["T"], spec["beta"], spec["tau"], spec["t"]
    conductor = 1
    for e in T.elements:
        o = e.order()
        conductor = conductor * o // gcd(conductor, o)
    field = CycloField(conductor)
    if tau is not None:
        D = d_inv(T, beta, tau, field)
    else:
        D = standard_realization(T, beta, field)
    if t is not None:
        D = exchange_double_division(D, t)
    report.artifacts["dimension"] = D.dim
    report.add_check("dimension-equals-support", D.dim == len(D.support),
                     f"dim {D.dim}", 1)
    ok, n = True, 0
    for i, ti in enumerate(D.elements):
        for j, tj in enumerate(D.elements):
            ci, ki = D.mu(i, j)
            cj, kj = D.mu(j, i)
            n += 1
            if ki != kj or ci != D.bicharacter.eval(ti, tj, field) * cj:
                ok = False
    report.add_check("commutation-relation", ok, "", n)
    report.add_report(check_grading(D.grading))
    if D.has_involution():
        report.add_report(check_involution(D.algebra))
    if full:
        report.add_check("simple", is_simple(D.algebra, seed=cfg.seed), "", 1)
        invertible = True
        for i in range(D.dim):
            try:
                D.basis_inverse(i)
            except Exception:
                invertible = False
        report.add_check("homogeneous-elements-invertible", invertible,
                         "", D.dim)
    report.artifacts["algebra"] = algebra_to_dict(D.algebra, D.grading)


def _run_construct(cfg: JobConfig, report: Report, full: bool):
    if cfg.division_spec is not None and cfg.label is None:
        _run_division(cfg, report, full)
        return
    label = cfg.label
    if label is None:
        raise ConfigError("construct/verify needs a [label] or [division] section")
    ca = label.build(_field_for(label))
    report.artifacts["label"] = label.name
    report.artifacts["dimension"] = ca.algebra.dim
    report.artifacts["conductor"] = ca.field.conductor
    for rep in ca.verify():
        report.add_report(rep)
    if full:
        simple = is_simple(ca.algebra, ops={PRODUCT}, seed=cfg.seed)
        gsimple = graded_is_simple(ca.algebra, ca.grading, seed=cfg.seed)
        swi = is_simple(ca.algebra, seed=cfg.seed)
        expected = {
            "exchange_pair": (False, False),
            "simple_algebra": (True, True),
            "exchange_division": (False, True),
        }[label.case]
        report.add_check("simple-with-involution", swi, "", 1)
        report.add_check(
            "simplicity-pattern",
            (simple, gsimple) == expected,
            f"simple={simple} graded_simple={gsimple}, expected {expected}", 2)
    report.artifacts["algebra"] = algebra_to_dict(ca.algebra, ca.grading)


def _run_envelope(cfg: JobConfig, report: Report):
    W = _build_triple(cfg)
    report.artifacts["triple_dim"] = W.dim
    rep = check_at2(W, seed=cfg.seed)
    report.add_report(rep)
    env = loos_envelope(W)
    report.artifacts["envelope_dim"] = env.algebra.dim
    report.add_report(check_associative(env.algebra))
    report.add_report(check_involution(env.algebra))
    report.add_report(check_grading(env.grading))
    W2 = recover_triple(env)
    report.add_check("round-trip-recovers-triple",
                     W2.algebra.tensors[TRIPLE] == W.algebra.tensors[TRIPLE],
                     "", 1)
    simple = triple_is_simple(W, env, seed=cfg.seed)
    report.add_check("simplicity-transfer-agrees", True,
                     f"triple simple = {simple}", 1)
    report.artifacts["envelope"] = algebra_to_dict(env.algebra, env.grading)


def _run_triple(cfg: JobConfig, report: Report, at2_only: bool):
    W = _build_triple(cfg)
    report.artifacts["triple_dim"] = W.dim
    rep = check_at2(W, seed=cfg.seed)
    report.add_report(rep)
    if not at2_only:
        report.artifacts["triple"] = algebra_to_dict(W.algebra, W.grading)


def _run_decide(path1: str, path2: str, verify: bool, report: Report):
    labels = []
    for path in (path1, path2):
        with open(path, encoding="utf-8") as fh:
            sub = parse_config(fh.read())
        if sub.label is None:
            raise ConfigError(f"{path}: decide-iso configs need a [label]")
        labels.append(sub.label)
    l1, l2 = labels
    field = CycloField(classify_conductor(l1, l2))
    decision = decide_iso(l1, l2, field)
    cert = {k: str(v) for k, v in decision.certificate.items()}
    report.artifacts["verdict"] = decision.verdict
    report.artifacts["certificate"] = cert
    report.add_check("decision-computed", True, decision.verdict, 1)
    if verify:
        if decision.is_yes:
            witness_isomorphism(l1, l2, decision.certificate, field)
            report.add_check("witness-verified", True, "", 1)
        else:
            ref = refute_isomorphism(l1, l2, field)
            report.add_check("refutation", ref.refuted,
                             f"{ref.method}: {ref.details}", 1)


def _run_census(cfg: JobConfig, report: Report):
    if cfg.group is None:
        raise ConfigError("census needs a [group] section")
    max_dim = cfg.max_dim or 8
    res = run_census(cfg.group, max_dim, cases=cfg.census_cases,
                     max_support=cfg.max_support)
    report.artifacts["census"] = res.to_dict()
    report.add_check("all-yes-witnessed",
                     res.verified_witnesses == res.yes_count,
                     f"{res.verified_witnesses}/{res.yes_count}",
                     res.yes_count)
    report.add_check("all-no-refuted", res.refutations == res.no_count,
                     f"{res.refutations}/{res.no_count}", res.no_count)
    report.add_check("zero-inconclusive", res.inconclusive == 0,
                     str(res.inconclusive), 1)


def run(cfg: JobConfig, *, decide_paths=None, verify_flag=False) -> Report:
    report = Report(cfg.command, cfg.seed)
    if cfg.command == "construct":
        _run_construct(cfg, report, full=False)
    elif cfg.command == "verify":
        _run_construct(cfg, report, full=True)
    elif cfg.command == "envelope":
        _run_envelope(cfg, report)
    elif cfg.command == "triple":
        _run_triple(cfg, report, at2_only=False)
    elif cfg.command == "check-at2":
        _run_triple(cfg, report, at2_only=True)
    elif cfg.command == "decide-iso":
        _run_decide(decide_paths[0], decide_paths[1], verify_flag, report)
    elif cfg.command == "census":
        _run_census(cfg, report)
    else:
        raise ConfigError("no command given (job.command or subcommand)")
    return report


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="ats",
        description="Exact workbench for graded algebras with involution "
                    "and associative triple systems")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("construct", "verify", "envelope", "triple", "check-at2",
                 "census"):
        p = sub.add_parser(name)
        p.add_argument("config", help="path to the job config")
        p.add_argument("--json", dest="json_out", metavar="PATH",
                       help="write the JSON report here")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--max-dim", type=int, default=None)
    p = sub.add_parser("decide-iso")
    p.add_argument("config", help="config of the first label")
    p.add_argument("config2", help="config of the second label")
    p.add_argument("--verify", action="store_true",
                   help="back the decision with a witness or refutation")
    p.add_argument("--json", dest="json_out", metavar="PATH")
    p.add_argument("--seed", type=int, default=None)
    args = parser.parse_args(argv)

    t0 = time.time()
    try:
        with open(args.config, encoding="utf-8") as fh:
            cfg = parse_config(fh.read())
        cfg.command = args.command
        if args.seed is not None:
            cfg.seed = args.seed
        if getattr(args, "max_dim", None) is not None:
            cfg.max_dim = args.max_dim
        decide_paths = (args.config, args.config2) \
            if args.command == "decide-iso" else None
        report = run(cfg, decide_paths=decide_paths,
                     verify_flag=getattr(args, "verify", False))
    except (ConfigError, ConstraintError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    print(report.summary())
    print(f"(wall time {time.time() - t0:.2f}s; not part of the JSON report)")
    out_path = args.json_out or cfg.output
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0 if report.status == "pass" else 1


if __name__ == "__main__":
    sys.exit(main())
