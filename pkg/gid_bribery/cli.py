import argparse
import logging
import sys

from gid_bribery.config import Settings
from gid_bribery.core import (
    CheckResult,
    CostKind,
    GoalKind,
    SocialRule,
    SolveResult,
    Status,
    check_solution,
    cost_of,
    finalize,
)
from gid_bribery.dispatch import SOLVERS, dispatch
from gid_bribery.errors import Infeasible, InstanceTooLarge, SearchBoundExceeded, Unsupported, ValidationError
from gid_bribery.fileio import parse_instance, parse_solution, render_solution, serialize_instance
from gid_bribery.generate import (
    ReductionKind,
    build_reduction,
    format_reduction_input,
    generate_random,
    generate_reduction_input,
    parse_reduction_input,
)
from gid_bribery.oracle import oracle_agent, oracle_link, oracle_link_deletions
from gid_bribery.rules import evaluate
from gid_bribery.tables import qualification_gt, qualification_table
from gid_bribery.utilities import format_flip

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_UNSUPPORTED = 3
EXIT_INPUT = 4

_EXIT_BY_STATUS = {
    Status.OPTIMAL: EXIT_OK,
    Status.INFEASIBLE: EXIT_INFEASIBLE,
    Status.BUDGET_EXCEEDED: EXIT_INFEASIBLE,
    Status.UNSUPPORTED: EXIT_UNSUPPORTED,
}


def valid_seed(seed):
    seed = int(seed)
    if seed < 0 or seed > 2**64 - 1:
        raise argparse.ArgumentTypeError("seed must be any integer between 0 and 2**64 - 1 inclusive")
    return seed


def valid_density(p):
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise argparse.ArgumentTypeError("density must lie in [0, 1]")
    return p


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as handle:
        return handle.read()


def _write(text, path):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)


def _rule(name, s=None, t=None):
    if name == "consent":
        if s is None or t is None:
            raise ValidationError("the consent rule needs --s and --t")
        return SocialRule.consent(s, t)
    return SocialRule.lsr() if name == "lsr" else SocialRule.csr()


# /////////////////////////////////////////////////////////////////////////////
# Sub-commands
def cmd_eval(args, settings):
    instance = parse_instance(_read(args.file))
    qualified = sorted(evaluate(instance.profile, instance.rule))
    print(" ".join(["qualified", str(len(qualified))] + [str(a) for a in qualified]))
    if args.table:
        print(qualification_table(instance.profile, instance.rule).to_string(index=False))
    if args.html:
        _write(qualification_gt(instance.profile, instance.rule).as_raw_html(), args.html)
    return EXIT_OK


def cmd_solve(args, settings):
    instance = parse_instance(_read(args.file))
    result = dispatch(instance, settings, args.algorithm)
    if result.message:
        logger.info(result.message)
    sys.stdout.write(render_solution(result))
    return _EXIT_BY_STATUS[result.status]


def cmd_oracle(args, settings):
    instance = parse_instance(_read(args.file))
    witnesses = []
    try:
        if instance.cost.kind is CostKind.LINK:
            if args.deletions_only and instance.rule.is_iterative and not args.all_witnesses:
                cost, witness = oracle_link_deletions(instance)
                witnesses = [witness]
            else:
                max_n = args.max_n if args.max_n is not None else settings.oracle_link_max_n
                cost, witnesses = oracle_link(instance, max_n=max_n, deletions_only=args.deletions_only)
        else:
            max_n = args.max_n if args.max_n is not None else settings.oracle_agent_max_n
            cost, witness = oracle_agent(instance, max_n=max_n, max_bribed=settings.oracle_max_bribed)
            witnesses = [witness]
        result = finalize(instance, witnesses[0], "oracle")
    except Infeasible as e:
        result = SolveResult.infeasible(str(e))
    except (InstanceTooLarge, SearchBoundExceeded, Unsupported) as e:
        logger.warning("oracle gave up: %s", e)
        result = SolveResult.unsupported(str(e))

    sys.stdout.write(render_solution(result))
    if args.all_witnesses and result.witness is not None:
        print(f"witnesses {len(witnesses)}")
        for i, w in enumerate(witnesses, start=1):
            print(f"witness {i} {len(w)}")
            for f in w.sorted():
                print(format_flip(f))
    return _EXIT_BY_STATUS[result.status]


def cmd_check(args, settings):
    instance = parse_instance(_read(args.instance))
    status, cost, flips = parse_solution(_read(args.solution))
    if flips is None:
        print(f"nothing to check for status {status.value}")
        return _EXIT_BY_STATUS[status]
    verdict = check_solution(instance, flips)
    actual = cost_of(flips, instance.cost)
    if actual != cost:
        print(f"cost_mismatch reported {cost} actual {actual}")
        return EXIT_INFEASIBLE
    print(verdict.value)
    return EXIT_OK if verdict is CheckResult.OK else EXIT_INFEASIBLE


def cmd_gen(args, settings):
    if args.reduction_input:
        data = generate_reduction_input(args.reduction_input, args.seed, args.size)
        _write(format_reduction_input(args.reduction_input, data), args.output)
        return EXIT_OK
    if args.n is None:
        raise ValidationError("gen needs --n (or --reduction-input)")
    instance = generate_random(
        args.n,
        _rule(args.rule, args.s, args.t),
        goal_kind=GoalKind(args.goal),
        plus=args.plus,
        minus=args.minus,
        cost_kind=CostKind(args.cost),
        density=args.density,
        seed=args.seed,
        price_range=tuple(args.prices),
        budget=args.budget,
    )
    _write(serialize_instance(instance, comment=f"gen seed {args.seed}"), args.output)
    return EXIT_OK


def cmd_reduce(args, settings):
    data = parse_reduction_input(args.kind, _read(args.input))
    instance = build_reduction(args.kind, data, _rule(args.rule), extra_agent=args.extra_agent)
    _write(serialize_instance(instance, comment=f"{args.kind} reduction"), args.output)
    return EXIT_OK


# /////////////////////////////////////////////////////////////////////////////
# Argument parsing
def build_parser():
    parser = argparse.ArgumentParser(
        prog="gid-bribery",
        description="Group identification rules and minimum-cost bribery.",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG logging.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="Print the socially qualified agents of an instance file.")
    p.add_argument("file")
    p.add_argument("--table", action="store_true", help="Also print the per-agent summary table.")
    p.add_argument("--html", metavar="FILE", help="Write the summary table as HTML.")
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser("solve", help="Solve an instance with the routed solver.")
    p.add_argument("file")
    p.add_argument("--algorithm", default="auto", choices=["auto"] + sorted(SOLVERS))
    p.add_argument("--single-thread", action="store_true", help="Evaluate guess loops sequentially.")
    p.set_defaults(handler=cmd_solve)

    p = sub.add_parser("oracle", help="Solve an instance by exhaustive search.")
    p.add_argument("file")
    p.add_argument("--max-n", type=int, default=None)
    p.add_argument("--all-witnesses", action="store_true", help="List every optimal witness (link prices).")
    p.add_argument("--deletions-only", action="store_true", help="Only allow removing qualifications.")
    p.set_defaults(handler=cmd_oracle)

    p = sub.add_parser("check", help="Validate a solution report against an instance.")
    p.add_argument("instance")
    p.add_argument("solution")
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("gen", help="Generate a seeded random instance or reduction input.")
    p.add_argument("--n", type=int)
    p.add_argument("--rule", choices=["lsr", "csr", "consent"], default="lsr")
    p.add_argument("--s", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--cost", choices=[k.value for k in CostKind], default="agent")
    p.add_argument("--goal", choices=[k.value for k in GoalKind], default="constructive")
    p.add_argument("--plus", type=int, default=1, help="|A+| (default 1).")
    p.add_argument("--minus", type=int, default=0, help="|A-| (default 0).")
    p.add_argument("--density", type=valid_density, default=0.5)
    p.add_argument("--prices", type=int, nargs=2, metavar=("LO", "HI"), default=[1, 1])
    p.add_argument("--budget", type=int)
    p.add_argument("--reduction-input", choices=[k.value for k in ReductionKind])
    p.add_argument("--size", type=int, help="Size hint for --reduction-input.")
    p.add_argument("--seed", type=valid_seed, default=0, help="Random generator seed (default 0).")
    p.add_argument("-o", "--output")
    p.set_defaults(handler=cmd_gen)

    p = sub.add_parser("reduce", help="Build a hardness-reduction instance.")
    p.add_argument("kind", choices=[k.value for k in ReductionKind])
    p.add_argument("input")
    p.add_argument("--rule", choices=["lsr", "csr"], default="lsr", help="Rule for setcover and x3c.")
    p.add_argument("--extra-agent", action="store_true", help="Independent Set variant with one extra agent.")
    p.add_argument("-o", "--output")
    p.set_defaults(handler=cmd_reduce)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")

    try:
        settings = Settings.from_env()
        if getattr(args, "single_thread", False):
            settings = settings.single_threaded()
        return args.handler(args, settings)
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
