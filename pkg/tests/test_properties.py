from lambdacube import App, print_term
from lambdacube.properties import ENCODING_PROPERTIES, PROPERTIES, run_properties


def test_registries():
    assert set(PROPERTIES) == {
        "subject-reduction", "type-uniqueness", "confluence", "print-parse",
        "marked-subject-reduction", "contents-morphism", "beta-lifting", "toto", "tyty",
        "marked-soundness",
    }
    assert set(ENCODING_PROPERTIES) == {
        "encoding-free-variables", "encoding-substitution", "encoding-simulation",
        "encoding-typing",
    }


def test_all_properties_hold_on_mixed_cases(mixed_small):
    report = run_properties(mixed_small)
    assert report.ok, report.render()
    assert all(n == len(mixed_small) for n in report.counts.values())


def _no_application(c):
    return "is an application" if isinstance(c.term, App) else None


def test_failures_are_shrunk_and_reported(corpus):
    cases = [c for c in corpus if isinstance(c.term, App)][:3]
    report = run_properties(cases, {"no-application": _no_application})
    assert not report.ok and len(report.failures) == 3
    for f in report.failures:
        # the smallest failing strict subterm is a single application of a variable
        shrunk = f.shrunk.term
        assert isinstance(shrunk, App) and not isinstance(shrunk.fun, App)
    text = report.render()
    assert "no-application" in text and "3 failure(s)" in text
    assert print_term(report.failures[0].shrunk.term, report.failures[0].shrunk.ctx) in text
    assert text == run_properties(cases, {"no-application": _no_application}).render()
