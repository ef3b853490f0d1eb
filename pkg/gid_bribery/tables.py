import pandas as pd
from great_tables import GT, html, md

from gid_bribery.core import QualificationProfile, SocialRule, qualifier_counts
from gid_bribery.rules import evaluate, initial_set
from gid_bribery.utilities import format_agents


# /////////////////////////////////////////////////////////////////////////////
# Define a function that summarises every agent of a profile under a rule
def qualification_table(profile: QualificationProfile, rule: SocialRule) -> pd.DataFrame:
    """
    One row per agent with its self-opinion, qualifier counts and membership.

    Parameters:
        profile (QualificationProfile): The qualification profile.
        rule (SocialRule): The rule to evaluate.

    Returns:
        pd.DataFrame: columns agent, self, Q+, Q-, initial, qualified.
        "initial" marks the seed set of an iterative rule and is always False
        under a consent rule.

    Dependencies:
    - pandas
    """
    qualified = evaluate(profile, rule)
    seeds = initial_set(profile, rule) if rule.is_iterative else frozenset()

    rows = []
    for a in profile.agents:
        qplus, qminus = qualifier_counts(profile, a)
        rows.append(
            {
                "agent": f"a{a}",
                "self": "+" if profile.self_qualifies(a) else "-",
                "Q+": qplus,
                "Q-": qminus,
                "initial": a in seeds,
                "qualified": a in qualified,
            }
        )
    return pd.DataFrame(rows, columns=["agent", "self", "Q+", "Q-", "initial", "qualified"])


# /////////////////////////////////////////////////////////////////////////////
# Define a function that renders the summary as a GT table
def qualification_gt(profile: QualificationProfile, rule: SocialRule) -> GT:
    """
    Generates a GT table of qualification_table with bold column labels and
    the qualified set as a source note.

    Dependencies:
    - pandas
    - great_tables
    """
    df = qualification_table(profile, rule)
    label_map = {col: md(f"**{col}**") for col in df.columns}
    qualified = [int(a[1:]) for a in df.loc[df["qualified"], "agent"]]

    gt_table = (
        GT(df)
        .tab_header(title=f"Qualification under {rule}", subtitle=f"n = {profile.n}")
        .cols_label(cases=label_map)
        .tab_source_note(source_note=html(f"Socially qualified: {format_agents(qualified)}"))
    )
    return gt_table
