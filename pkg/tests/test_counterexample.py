from __future__ import annotations

from core.counterexample import VERTEX_NAMES, build_counterexample, counterexample
from core.simult import Exhausted, Fail, necess_check, necessary_failures, search_simultaneous


class TestCounterexample:
    def test_shape(self):
        cx = counterexample()
        assert cx.lattice.size == 21
        assert [v.size for v in cx.system.vertices] == [5, 8, 8, 21]
        assert cx.system.names == VERTEX_NAMES
        assert all(ok for _, ok in cx.constraints)
        assert build_counterexample() is cx.system

    def test_every_vertex_is_distributive(self):
        assert all(v.is_distributive() for v in counterexample().system.vertices)

    def test_named_elements(self):
        cx = counterexample()
        a = cx.lattice
        assert a.join(cx.elements["p1"], cx.elements["p2"]) == a.top
        assert a.meet(cx.elements["p1"], cx.elements["p2"]) == cx.elements["p"]
        assert cx.element("A", "r1") == cx.elements["r1"]

    def test_necessary_condition_fails_at_p(self):
        cx = counterexample()
        sys = cx.system
        s, a = sys.point("S"), sys.point("A")
        verdict = necess_check(sys, s, a, cx.element("S", "p"))
        assert isinstance(verdict, Fail)
        witnesses = {(ob.k, ob.r) for ob in verdict.obstructions}
        assert (sys.point("A1"), cx.element("A1", "r1")) in witnesses
        assert (sys.point("A2"), cx.element("A2", "r2")) in witnesses

    def test_search_exhausts_the_square(self):
        sys = counterexample().system
        result = search_simultaneous(sys)
        assert isinstance(result, Exhausted)
        assert 0 < result.work < 10 ** 5
        assert result.reason == "no embedding with at most 6 atoms per point"
        assert len(result.failures) == len(necessary_failures(sys))

    def test_search_without_the_necessary_condition(self):
        result = search_simultaneous(counterexample().system, check_necessary_condition=False)
        assert isinstance(result, Exhausted)
        assert result.work > 0
        assert result.failures == ()

    def test_parallel_search_exhausts_the_square(self):
        sys = counterexample().system
        sequential = search_simultaneous(sys)
        parallel = search_simultaneous(sys, workers=2)
        assert isinstance(parallel, Exhausted)
        assert parallel.work == sequential.work
