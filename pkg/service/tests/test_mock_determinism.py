import subprocess
import sys


def run_selftest(seed):
    result = subprocess.run(
        [sys.executable, "-m", "mover_service.selftest", "--seed", str(seed)],
        capture_output=True, timeout=120)
    assert result.returncode == 0, result.stderr.decode()
    return result.stdout


def test_mock_identical_across_process_launches():
    first = run_selftest(0)
    second = run_selftest(0)
    assert first == second
    assert first.strip()


def test_mock_seed_changes_responses():
    assert run_selftest(0) != run_selftest(1)
