from gid_bribery.core import SocialRule
from gid_bribery.tables import qualification_gt, qualification_table


class TestQualificationTable:
    """Per-agent summaries."""

    def test_liberal_start(self, example_profile):
        df = qualification_table(example_profile, SocialRule.lsr())
        assert list(df.columns) == ["agent", "self", "Q+", "Q-", "initial", "qualified"]
        assert df["agent"].tolist() == ["a1", "a2", "a3", "a4", "a5"]
        assert df["self"].tolist() == ["+", "-", "-", "+", "-"]
        assert df["Q+"].tolist() == [5, 3, 1, 2, 0]
        assert (df["Q+"] + df["Q-"] == 5).all()
        assert df["initial"].tolist() == [True, False, False, True, False]
        assert df["qualified"].tolist() == [True, True, False, True, False]

    def test_consent_has_no_initial_set(self, example_profile):
        df = qualification_table(example_profile, SocialRule.consent(3, 3))
        assert not df["initial"].any()
        assert df.loc[df["qualified"], "agent"].tolist() == ["a1", "a2"]

    def test_gt_source_note(self, example_profile):
        html = qualification_gt(example_profile, SocialRule.csr()).as_raw_html()
        assert "Socially qualified" in html
        assert "a1, a2" in html
