import numpy as np
import pytest

from kerrcat.optimize import (INFEASIBLE_SCORE, OptimizationRecord, ParamSpace,
                              grid_search)


def quad_objective(x, y):
    return (x - 0.3) ** 2 + (y + 0.4) ** 2, 0.0


def test_param_space_validation():
    with pytest.raises(ValueError):
        ParamSpace(names=("a", "b"), lower=np.zeros(2), upper=np.array([-1.0, 1.0]))
    with pytest.raises(ValueError):
        ParamSpace(names=("a",), lower=np.zeros(2), upper=np.ones(2))
    ps = ParamSpace.from_dict({"x": (0.0, 1.0), "y": (-1.0, 0.0)})
    assert ps.names == ("x", "y")
    assert ps.lower[1] == -1.0


def test_quadratic_minimum_found():
    ps = ParamSpace.from_dict({"x": (0.0, 1.0), "y": (-1.0, 0.0)})
    rec = grid_search(quad_objective, ps, coarse_n=11, refine_rounds=3)
    assert rec.best_params["x"] == pytest.approx(0.3, abs=2e-3)
    assert rec.best_params["y"] == pytest.approx(-0.4, abs=2e-3)
    assert rec.best_score < 1e-5


def test_refinement_monotone():
    ps = ParamSpace.from_dict({"x": (0.0, 1.0)})

    def f(x):
        return np.abs(x - 0.437), 0.0

    per_round = []
    for rounds in range(4):
        rec = grid_search(f, ps, coarse_n=9, refine_rounds=rounds)
        per_round.append(rec.best_score)
    assert all(b <= a + 1e-15 for a, b in zip(per_round, per_round[1:]))
    assert per_round[-1] < per_round[0]


def test_determinism():
    ps = ParamSpace.from_dict({"x": (0.0, 2.0), "y": (0.0, 2.0)})
    rec1 = grid_search(quad_objective, ps, coarse_n=7, refine_rounds=2)
    rec2 = grid_search(quad_objective, ps, coarse_n=7, refine_rounds=2)
    assert rec1.best_params == rec2.best_params
    assert rec1.best_score == rec2.best_score
    assert rec1.history == rec2.history


def test_tie_break_is_lexicographic():
    ps = ParamSpace.from_dict({"x": (0.0, 1.0)})

    def flat(x):
        return 1.0, 1.0

    rec = grid_search(flat, ps, coarse_n=5, refine_rounds=0)
    assert rec.best_params["x"] == 0.0


def test_infeasible_points_never_win():
    ps = ParamSpace.from_dict({"x": (0.0, 1.0)})

    def partial(x):
        if x < 0.5:
            return INFEASIBLE_SCORE, INFEASIBLE_SCORE
        return (x - 0.7) ** 2, 0.0

    rec = grid_search(partial, ps, coarse_n=11, refine_rounds=2)
    assert rec.best_params["x"] >= 0.5
    assert rec.best_params["x"] == pytest.approx(0.7, abs=5e-3)


def test_best_matches_reevaluation():
    ps = ParamSpace.from_dict({"x": (0.0, 1.0), "y": (-1.0, 0.0)})
    rec = grid_search(quad_objective, ps, coarse_n=9, refine_rounds=1)
    score, _ = quad_objective(**rec.best_params)
    assert score == rec.best_score
    assert rec.n_evaluations == len(rec.history) == 2 * 9 * 9


def test_record_json_roundtrip(tmp_path):
    ps = ParamSpace.from_dict({"x": (0.0, 1.0)})
    rec = grid_search(lambda x: (x * x, x), ps, coarse_n=5, refine_rounds=0)
    path = tmp_path / "rec.json"
    rec.to_json(path)
    back = OptimizationRecord.from_json(path)
    assert back.best_params == rec.best_params
    assert back.best_score == rec.best_score
    assert back.history == rec.history
