"""Every bundled poem judged against its declared form.

Runs the combined structural/meter/rhyme evaluation over the sample corpus,
prints one verdict line per poem, then breaks a sestina on purpose to show
how failures are named.
"""

from importlib import resources

from poemetric.corpus import aggregate_authors, load_corpus
from poemetric.form_validator import evaluate_form
from poemetric.lexicon import load_dictionary


def data(name):
    return resources.files("poemetric.data").joinpath(name)


def fmt(ratio):
    return "   - " if ratio is None else f"{ratio:.3f}"


lex = load_dictionary(data("sample_lexicon.dict"))
records = load_corpus(data("sample_poems.jsonl"))

print(f"{'poem':34} {'form':10} {'meter':>6} {'rhyme':>6}  verdict")
for rec in records:
    report = evaluate_form(rec.body, rec.to_form_spec(), lex, refrain_tolerance=2)
    verdict = "PASS" if report.passed else "FAIL"
    print(f"{rec.id:34} {rec.form:10} {fmt(report.meter_ratio):>6} "
          f"{fmt(report.rhyme_ratio):>6}  {verdict}")
    for failure in report.structural_failures:
        print(f"{'':34}   {failure.check}: {failure.detail}")

# Structural forms report named failures rather than ratios. Swap one end
# word of the sestina and the permutation check points at the stanza.
sestina = next(rec for rec in records if rec.form == "sestina")
broken = sestina.body.replace("along the dusty road,", "along the dusty water,")
report = evaluate_form(broken, sestina.to_form_spec(), lex)
print(f"\nsestina with one end word changed -> passed={report.passed}")
for failure in report.structural_failures:
    print(f"  {failure.check}: {failure.detail}")
