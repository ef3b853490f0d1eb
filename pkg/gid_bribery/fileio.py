import logging
from collections import Counter

from gid_bribery.core import (
    DISQUALIFY,
    QUALIFY,
    BriberyInstance,
    CostKind,
    CostModel,
    Flip,
    FlipSet,
    Goal,
    GoalKind,
    QualificationProfile,
    RuleKind,
    SocialRule,
    Status,
)
from gid_bribery.errors import ParseError, ValidationError
from gid_bribery.utilities import format_flip

logger = logging.getLogger(__name__)


def _tokens(text):
    """Yield (line number, tokens) for every non-blank line, comments stripped."""
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line.split()


def _int(token, number, what):
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got '{token}'", number)


def _counted_list(tokens, number, keyword):
    """Parse '<k> <i1> ... <ik>' into a list of ints."""
    if not tokens:
        raise ParseError(f"'{keyword}' needs a count", number)
    k = _int(tokens[0], number, f"{keyword} count")
    values = [_int(tok, number, f"{keyword} entry") for tok in tokens[1:]]
    if len(values) != k:
        raise ParseError(f"'{keyword}' announces {k} agents but lists {len(values)}", number)
    repeated = sorted(v for v, count in Counter(values).items() if count > 1)
    if repeated:
        raise ParseError(f"'{keyword}' lists agents {repeated} more than once", number)
    return values


# /////////////////////////////////////////////////////////////////////////////
# Parse an instance file
def parse_instance(text):
    """
    Parse the line-oriented instance format.

    Parameters:
    text : str, the file content

    Returns:
    BriberyInstance, fully validated

    Raises:
    ParseError with the offending line number for malformed text;
    ValidationError (or InvalidRuleParameters) for well-formed text with
    inconsistent content
    """
    lines = list(_tokens(text))
    n = rule = cost_kind = budget = None
    goals = {}
    rows = agent_prices = link_prices = None
    i = 0

    def read_block(keyword, start):
        if start + n > len(lines):
            raise ParseError(f"'{keyword}' needs {n} lines", lines[start - 1][0])
        return lines[start:start + n]

    while i < len(lines):
        number, tokens = lines[i]
        keyword, args = tokens[0], tokens[1:]
        i += 1

        if keyword == "agents":
            if len(args) != 1:
                raise ParseError("'agents' takes exactly one value", number)
            n = _int(args[0], number, "agent count")
            if n < 1:
                raise ParseError(f"agent count must be positive, got {n}", number)
        elif keyword == "rule":
            if args[:1] in (["lsr"], ["csr"]) and len(args) == 1:
                rule = SocialRule.lsr() if args[0] == "lsr" else SocialRule.csr()
            elif args[:1] == ["consent"] and len(args) == 3:
                rule = SocialRule.consent(_int(args[1], number, "s"), _int(args[2], number, "t"))
            else:
                raise ParseError(f"unknown rule '{' '.join(args)}'", number)
        elif keyword == "cost":
            if args not in (["agent"], ["link"]):
                raise ParseError(f"cost must be 'agent' or 'link', got '{' '.join(args)}'", number)
            cost_kind = CostKind(args[0])
        elif keyword == "goal":
            if not args or args[0] not in ("constructive", "destructive", "exact"):
                raise ParseError("goal must be constructive, destructive or exact", number)
            if args[0] in goals:
                raise ParseError(f"duplicate '{args[0]}' goal", number)
            goals[args[0]] = (number, _counted_list(args[1:], number, f"goal {args[0]}"))
        elif keyword == "budget":
            if len(args) != 1:
                raise ParseError("'budget' takes exactly one value", number)
            budget = _int(args[0], number, "budget")
        elif keyword == "profile":
            if n is None:
                raise ParseError("'profile' must follow 'agents'", number)
            rows = []
            for row_number, row_tokens in read_block("profile", i):
                row = "".join(row_tokens)
                if len(row) != n or set(row) - {"0", "1"}:
                    raise ParseError(f"profile rows must be {n} characters of 0/1, got '{row}'", row_number)
                rows.append(row)
            i += n
        elif keyword == "agentprices":
            agent_prices = [_int(tok, number, "agent price") for tok in args]
        elif keyword == "linkprices":
            if n is None:
                raise ParseError("'linkprices' must follow 'agents'", number)
            link_prices = []
            for row_number, row_tokens in read_block("linkprices", i):
                if len(row_tokens) != n:
                    raise ParseError(f"link price rows need {n} values, got {len(row_tokens)}", row_number)
                link_prices.append([_int(tok, row_number, "link price") for tok in row_tokens])
            i += n
        else:
            raise ParseError(f"unknown keyword '{keyword}'", number)

    last = lines[-1][0] if lines else 1
    for value, keyword in ((n, "agents"), (rule, "rule"), (cost_kind, "cost"), (rows, "profile")):
        if value is None:
            raise ParseError(f"missing '{keyword}'", last)

    if "exact" in goals and len(goals) > 1:
        raise ValidationError("an exact goal cannot be combined with another goal")
    aplus = frozenset(goals.get("constructive", (0, []))[1])
    aminus = frozenset(goals.get("destructive", (0, []))[1])
    if "exact" in goals:
        goal = Goal.exact(goals["exact"][1])
    elif "constructive" in goals and "destructive" in goals:
        goal = Goal.const_dest(aplus, aminus)
    elif "destructive" in goals:
        goal = Goal.destructive(aminus)
    else:
        goal = Goal.constructive(aplus)

    if cost_kind is CostKind.AGENT:
        if link_prices is not None:
            raise ValidationError("'linkprices' given for an agent cost model")
        prices = agent_prices if agent_prices is not None else [1] * n
        if len(prices) != n:
            raise ValidationError(f"'agentprices' needs {n} values, got {len(prices)}")
        cost = CostModel.agent(prices)
    else:
        if agent_prices is not None:
            raise ValidationError("'agentprices' given for a link cost model")
        cost = CostModel.link(link_prices) if link_prices is not None else CostModel.unit_link(n)

    instance = BriberyInstance(QualificationProfile.from_rows(rows), rule, goal, cost, budget)
    logger.debug("parsed instance: n = %d, %s, %s goal", n, rule, goal.kind.value)
    return instance


# /////////////////////////////////////////////////////////////////////////////
# Write an instance file
def serialize_instance(instance, comment=None):
    """
    Write an instance in the format read by parse_instance.

    Const+Dest goals are written as a constructive and a destructive line,
    both always present, so the goal kind survives a round trip. Unit prices
    are left implicit.
    """
    n, rule, goal, cost = instance.n, instance.rule, instance.goal, instance.cost
    out = []
    if comment:
        out.extend(f"# {line}" for line in comment.splitlines())
    out.append(f"agents {n}")
    if rule.kind is RuleKind.CONSENT:
        out.append(f"rule consent {rule.s} {rule.t}")
    else:
        out.append(f"rule {rule.kind.value}")
    out.append(f"cost {cost.kind.value}")

    def goal_line(word, agents):
        agents = sorted(agents)
        return " ".join(["goal", word, str(len(agents))] + [str(a) for a in agents])

    if goal.kind is GoalKind.EXACT:
        out.append(goal_line("exact", goal.aplus))
    if goal.kind in (GoalKind.CONSTRUCTIVE, GoalKind.CONST_DEST):
        out.append(goal_line("constructive", goal.aplus))
    if goal.kind in (GoalKind.DESTRUCTIVE, GoalKind.CONST_DEST):
        out.append(goal_line("destructive", goal.aminus))
    if instance.budget is not None:
        out.append(f"budget {instance.budget}")
    out.append("profile")
    out.extend(instance.profile.to_rows())
    if not cost.is_unit:
        if cost.kind is CostKind.AGENT:
            out.append("agentprices " + " ".join(str(p) for p in cost.prices))
        else:
            out.append("linkprices")
            out.extend(" ".join(str(p) for p in row) for row in cost.prices)
    return "\n".join(out) + "\n"


# /////////////////////////////////////////////////////////////////////////////
# Solution reports
def render_solution(result):
    """
    Render a SolveResult as a solution report.

    INFEASIBLE and UNSUPPORTED results print the status line only; OPTIMAL
    and BUDGET_EXCEEDED print the cost, the sorted flips and the qualified
    set after bribery.
    """
    out = [f"status {result.status.value}"]
    if result.status in (Status.OPTIMAL, Status.BUDGET_EXCEEDED):
        flips = result.witness.sorted()
        qualified = sorted(result.qualified)
        out.append(f"cost {result.cost}")
        out.append(f"flips {len(flips)}")
        out.extend(format_flip(f) for f in flips)
        out.append(" ".join(["qualified", str(len(qualified))] + [str(a) for a in qualified]))
    return "\n".join(out) + "\n"


def parse_solution(text):
    """
    Read a solution report.

    Returns:
    (Status, cost or None, FlipSet or None)

    Raises:
    ParseError
    """
    lines = list(_tokens(text))
    if not lines or lines[0][1][0] != "status" or len(lines[0][1]) != 2:
        raise ParseError("report must start with 'status <STATUS>'", lines[0][0] if lines else 1)
    number, tokens = lines[0]
    try:
        status = Status(tokens[1])
    except ValueError:
        raise ParseError(f"unknown status '{tokens[1]}'", number)
    if status in (Status.INFEASIBLE, Status.UNSUPPORTED):
        return status, None, None

    def expect(index, keyword):
        if index >= len(lines) or lines[index][1][0] != keyword or len(lines[index][1]) != 2:
            at = lines[index][0] if index < len(lines) else lines[-1][0]
            raise ParseError(f"expected '{keyword} <value>'", at)
        return _int(lines[index][1][1], lines[index][0], keyword)

    cost = expect(1, "cost")
    m = expect(2, "flips")
    flips = []
    for number, tokens in lines[3:3 + m]:
        if len(tokens) != 3 or tokens[2] not in ("+", "-"):
            raise ParseError("flip lines read '<briber> <target> <+|->'", number)
        value = QUALIFY if tokens[2] == "+" else DISQUALIFY
        flips.append(Flip(_int(tokens[0], number, "briber"), _int(tokens[1], number, "target"), value))
    if len(lines) < 3 + m:
        raise ParseError(f"report announces {m} flips but lists {len(lines) - 3}", lines[-1][0])
    return status, cost, FlipSet.of(flips)
