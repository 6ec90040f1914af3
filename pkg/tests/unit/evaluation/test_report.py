import numpy as np
import pytest

from crossrec.enums import Method
from crossrec.evaluation.report import (
    EvalReport,
    write_reports,
    read_reports,
    aggregate,
    sign_test,
    RESULTS_FILENAME,
    SUMMARY_FILENAME,
)


def _report(method, seed, value):
    return EvalReport(method, seed, n_test=10, recall={1: value, 10: 1.0}, ndcg={1: value, 10: value}, empirical_target_risk=1.0 - value)


def test_report_validation():
    with pytest.raises(AssertionError):
        EvalReport(Method.NN, 0, 10, recall={1: 0.5, 10: 0.4})
    with pytest.raises(AssertionError):
        EvalReport(Method.NN, 0, 10, ndcg={1: 1.5})
    with pytest.raises(ValueError):
        EvalReport('KNN', 0, 10)


def test_write_and_read_reports(tmp_path):
    reports = [_report(Method.NN, 1, 0.25), _report(Method.I_DSN, 0, 0.5), _report(Method.NN, 0, 0.75)]
    paths = write_reports(reports, tmp_path)
    assert [p.name for p in paths] == ['report.yml', RESULTS_FILENAME, SUMMARY_FILENAME]
    loaded = read_reports(tmp_path)
    # sorted by method order, then seed
    assert [(r.method, r.seed) for r in loaded] == [(Method.I_DSN, 0), (Method.NN, 0), (Method.NN, 1)]
    assert loaded[1] == reports[2]
    lines = (tmp_path / RESULTS_FILENAME).read_text().splitlines()
    assert lines[0] == 'method\tK\tmetric\tvalue\tseed'
    assert lines[1] == 'I-DSN\t1\trecall\t0.5\t0'
    assert len(lines) == 1 + 3 * 5


def test_reports_are_byte_identical_regardless_of_input_order(tmp_path):
    reports = [_report(Method.NN, 1, 0.25), _report(Method.DSN, 0, 0.5)]
    write_reports(reports, tmp_path / 'a')
    write_reports(reports[::-1], tmp_path / 'b')
    for name in ('report.yml', RESULTS_FILENAME, SUMMARY_FILENAME):
        assert (tmp_path / 'a' / name).read_bytes() == (tmp_path / 'b' / name).read_bytes()


def test_aggregate_mean_and_sample_sd():
    rows = aggregate([_report(Method.NN, 0, 0.2), _report(Method.NN, 1, 0.4), _report(Method.POP, 0, 0.1)])
    by_key = {(r.method, r.K, r.metric): r for r in rows}
    nn = by_key[('NN', 1, 'recall')]
    assert nn.mean == pytest.approx(0.3)
    assert nn.sd == pytest.approx(np.std([0.2, 0.4], ddof=1))
    assert nn.num_seeds == 2
    assert by_key[('POP', 1, 'recall')].sd == 0.0


def test_sign_test():
    result = sign_test([0.5, 0.6, 0.7, 0.8, 0.9], [0.1, 0.2, 0.3, 0.4, 0.5])
    assert (result.wins, result.losses, result.ties) == (5, 0, 0)
    assert result.p_value == pytest.approx(1 / 32)
    assert sign_test([1.0, 2.0], [1.0, 2.0]).p_value == 1.0
    with pytest.raises(ValueError):
        sign_test([1.0], [1.0, 2.0])
