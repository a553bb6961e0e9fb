import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

# criterion number -> {'title': str, 'results': [(nodeid, outcome, seconds)]}
_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line('markers', 'criterion(n, title): acceptance criterion this test belongs to')


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker('criterion')
        if mark is not None:
            n, title = mark.args
            _CRITERIA.setdefault(n, {'title': title, 'results': {}})
            item.user_properties.append(('criterion', n))


def _outcome(report):
    if hasattr(report, 'wasxfail'):
        return 'xfail' if report.skipped else 'xpass'
    return report.outcome


def pytest_runtest_logreport(report):
    crit = dict(report.user_properties).get('criterion')
    if crit is None:
        return
    results = _CRITERIA[crit]['results']
    outcome = _outcome(report)
    prev = results.get(report.nodeid)
    if report.when == 'call' or (outcome != 'passed' and prev is None):
        results[report.nodeid] = (outcome, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section('acceptance criteria')
    for n in sorted(_CRITERIA):
        entry = _CRITERIA[n]
        results = entry['results']
        if not results:
            continue
        bad = [nid.split('::')[-1] + f' ({out})' for nid, (out, _) in results.items() if out != 'passed']
        secs = sum(d for _, d in results.values())
        verdict = 'FAIL' if bad else 'PASS'
        line = f'{verdict} criterion {n}: {entry["title"]} [{len(results) - len(bad)}/{len(results)} checks, {secs:.2f}s]'
        if bad:
            line += ' failing: ' + ', '.join(bad)
        tr.write_line(line)
