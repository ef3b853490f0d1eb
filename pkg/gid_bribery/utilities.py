from concurrent.futures import ThreadPoolExecutor
from contextlib import nullcontext


# /////////////////////////////////////////////////////////////////////////////
# Format a collection of 1-based agent ids the way reports print them
def format_agents(agents, prefix="a"):
    """
    Format a collection of agent ids.
    - Sorted ascending
    - Each id gets the prefix, so 3 becomes "a3"

    Parameters:
    agents : iterable of int, 1-based agent ids
    prefix : str, prepended to every id

    Returns:
    Formatted string such as "{a1, a2, a4}"
    """
    return "{" + ", ".join(f"{prefix}{a}" for a in sorted(agents)) + "}"


# /////////////////////////////////////////////////////////////////////////////
# Format one flip as it appears in a solution report
def format_flip(flip):
    sign = "+" if flip.value > 0 else "-"
    return f"{flip.briber} {flip.target} {sign}"


# /////////////////////////////////////////////////////////////////////////////
# Enumerate subsets of weighted items whose total stays within a budget
def subsets_within(prices, budget, max_size=None, items=None):
    """
    Yield every subset of items whose summed price is at most budget.

    Parameters:
    prices : mapping or sequence, price of each item (indexable by item)
    budget : int, inclusive upper bound on the summed price
    max_size : int or None, optional cap on the subset size
    items : iterable or None, the candidate items (default: range(len(prices)))

    Returns:
    Generator of (tuple of items, total price) in depth-first order.
    """
    pool = list(range(len(prices))) if items is None else list(items)
    cap = len(pool) if max_size is None else max_size

    def extend(start, chosen, total):
        yield tuple(chosen), total
        if len(chosen) == cap:
            return
        for i in range(start, len(pool)):
            item = pool[i]
            price = prices[item]
            if total + price > budget:
                continue
            chosen.append(item)
            yield from extend(i + 1, chosen, total + price)
            chosen.pop()

    if budget < 0:
        return
    yield from extend(0, [], 0)


# /////////////////////////////////////////////////////////////////////////////
# Evaluate a function over guesses and keep the cheapest outcome
def best_over(fn, guesses, workers=1, lower_bound=None):
    """
    Evaluate fn on every guess and return the cheapest non-None outcome.

    fn must return None (guess rejected) or a tuple whose first element is an
    integer cost. Ties are broken by guess order, so the answer does not
    depend on the number of workers.

    With lower_bound, guesses are ordered by their bound (ties keep input
    order) and run in batches of `workers`; a guess whose bound exceeds the
    best cost found so far is skipped. The bound must never exceed fn's cost.

    Parameters:
    fn : callable, guess -> None or (cost, ...)
    guesses : iterable of guesses
    workers : int, threads to use; 1 evaluates sequentially
    lower_bound : callable or None, guess -> int

    Returns:
    The winning tuple, or None if every guess was rejected.

    Dependencies:
    - concurrent.futures.ThreadPoolExecutor
    """
    guesses = list(guesses)
    if lower_bound is None:
        bounds, batch_size = None, max(len(guesses), 1)
    else:
        bounds = {i: lower_bound(g) for i, g in enumerate(guesses)}
        guesses = [guesses[i] for i in sorted(bounds, key=bounds.__getitem__)]
        bounds = sorted(bounds.values())
        batch_size = max(workers, 1)

    best = None
    threaded = workers > 1 and len(guesses) > 1
    with ThreadPoolExecutor(max_workers=workers) if threaded else nullcontext() as pool:
        for start in range(0, len(guesses), batch_size):
            batch = [
                g
                for i, g in enumerate(guesses[start : start + batch_size], start)
                if bounds is None or best is None or bounds[i] <= best[0]
            ]
            outcomes = pool.map(fn, batch) if threaded else map(fn, batch)
            for outcome in outcomes:
                if outcome is not None and (best is None or outcome[0] < best[0]):
                    best = outcome
    return best
