"""
Mining what makes interruptions hurt
====================================

Given a pile of interruption episodes, which circumstances go together
with high disruptiveness?  We mine association rules whose left side is
episode characteristics (who switched, when, to what) and whose right
side is disruptiveness levels (fragments, lags), then render each rule
as an English sentence.
"""

from fractions import Fraction

from switchlens import (
    CharacteristicItem,
    Discretization,
    Measure,
    MiningParams,
    RawInterruptionRecord,
    TaskType,
    default_lexicon,
    mine,
    render_disruptiveness,
)


def episode(initiator, time_of_day, context_switch, fragments, rlag_min, ilag_min):
    return RawInterruptionRecord(
        task_type=TaskType.MODELING,
        characteristics=frozenset(
            {
                CharacteristicItem("initiator", initiator),
                CharacteristicItem("time_of_day", time_of_day),
                CharacteristicItem("context_switch", context_switch),
            }
        ),
        fragments=fragments,
        resumption_lag_s=rlag_min * 60.0,
        interruption_lag_s=ilag_min * 60.0,
    )


# Five observed episodes of a modeling task.  Self-switches cluster in
# the morning; the external interruptions hit in the afternoon.
episodes = [
    episode("self", "morning", "same_project", 2, 1.0, 9.0),
    episode("self", "morning", "different_project", 2, 12.0, 8.0),
    episode("self", "morning", "different_project", 5, 2.0, 10.0),
    episode("external", "afternoon", "same_project", 2, 1.5, 0.5),
    episode("external", "afternoon", "different_project", 6, 14.0, 1.0),
]

# Discretize against thresholds from the team's norms (median mode is the
# default, but here "more than 3 fragments" and "more than 5 minutes" are
# what the team considers bad), then mine frequent mixed sets, meaning
# characteristics and disruptiveness levels appearing together.
params = MiningParams(
    min_support=Fraction(1, 2),
    min_confidence=Fraction(1, 2),
    task_type=TaskType.MODELING,
    discretization=Discretization(
        mode="fixed",
        thresholds={
            Measure.FRAGMENTS: 3.0,
            Measure.RESUMPTION_LAG: 5 * 60.0,
            Measure.INTERRUPTION_LAG: 5 * 60.0,
        },
    ),
)
rules = mine(episodes, params)

lexicon = default_lexicon()
print(f"{len(rules)} rules at support >= 1/2, confidence >= 1/2:\n")
for rule in rules:
    antecedent = ", ".join(
        f"{i.key}={i.value}" for i in sorted(rule.antecedent, key=lambda i: (i.key, i.value))
    )
    consequent = ", ".join(
        f"{i.measure.value}={i.level.value}"
        for i in sorted(rule.consequent, key=lambda i: i.measure.value)
    )
    print(f"  {{{antecedent}}} => {{{consequent}}}")
    print(f"    support {rule.support}, confidence {rule.confidence}")
    print(f"    {render_disruptiveness(rule, lexicon=lexicon).text}")
    print()

# Exact fractions end to end: support 3/5 stays 3/5, never 0.6000000001.
strongest = rules[0]
print(f"strongest rule confidence is exactly {strongest.confidence!r}")
