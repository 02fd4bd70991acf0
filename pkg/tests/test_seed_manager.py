from sim.seed import SeedManager


def test_seed_manager_deterministic() -> None:
    manager = SeedManager(base_seed=100)
    first = manager.case_seed("of-bracket", 1)
    second = manager.case_seed("of-bracket", 1)
    assert first == second
    assert manager.case_rng("parity", 3).random() == SeedManager(100).case_rng("parity", 3).random()


def test_seed_manager_uniqueness() -> None:
    manager = SeedManager(base_seed=1)
    assert manager.case_seed("parity", 1) != manager.case_seed("parity", 2)
    assert manager.case_seed("parity", 1) != manager.case_seed("hyperbolic", 1)
    assert manager.case_seed("parity", 1) != SeedManager(base_seed=2).case_seed("parity", 1)


def test_seed_range() -> None:
    manager = SeedManager()
    for index in range(50):
        assert 1 <= manager.case_seed("flow-rk4", index) < 2**31 - 1
