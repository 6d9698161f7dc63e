import json
import os
from fractions import Fraction

import pytest

from shimura_pq.certify import (
    CACHE_VERSION,
    build_cycle,
    cache_load,
    cache_path,
    cache_store,
    certificate_json,
    check_ogg,
    decompose_eisenstein,
    exit_code,
    genus,
    graph_from_payload,
    graph_payload,
    load_or_build_graph,
    run_criterion,
)
from shimura_pq.gross import tower_class_number, unit_count


class TestOgg:
    def test_fixtures(self):
        assert check_ogg(13, 47) == "nonramified"
        assert check_ogg(29, 251) == "nonramified"
        assert check_ogg(7, 47) == "none"
        assert check_ogg(11, 47) == "ramified"

    def test_invalid(self):
        with pytest.raises(ValueError):
            check_ogg(13, 13)
        with pytest.raises(ValueError):
            check_ogg(4, 47)
        with pytest.raises(ValueError):
            check_ogg(13, 3)


class TestGenus:
    def test_fixtures(self):
        assert genus(47) == 4
        assert genus(79) == 6
        assert genus(13) == 0
        assert genus(11) == 1
        assert genus(251) == 21
        assert genus(101) == 8

    def test_invalid(self):
        with pytest.raises(ValueError):
            genus(12)


class TestDecomposition:
    def test_13_47(self, graph_13_47):
        dec = decompose_eisenstein(graph_13_47, 3, genus(47) + 2)
        assert dec is not None
        assert dec["residual_zero"]
        assert dec["lambda0"] % 12 == 0 and dec["lambda0"] > 0
        assert all(lam % 12 == 0 for lam in dec["lambdas"])
        assert dec["degree_identity"]
        # degree identity spelled out
        lhs = dec["lambda0"] * Fraction(46, 12)
        rhs = sum(
            Fraction(lam * tower_class_number(3, n + 1), unit_count(-4 * 9 ** (n + 1)))
            for n, lam in enumerate(dec["lambdas"])
        )
        assert lhs == rhs

    def test_deterministic(self, graph_13_47):
        d1 = decompose_eisenstein(graph_13_47, 3, 6)
        d2 = decompose_eisenstein(graph_13_47, 3, 6)
        assert d1 == d2

    def test_rejects_bad_aux_prime(self, graph_13_47):
        with pytest.raises(ValueError):
            decompose_eisenstein(graph_13_47, 13, 5)
        with pytest.raises(ValueError):
            decompose_eisenstein(graph_13_47, 4, 5)


class TestBuildCycle:
    def test_structure_and_reporting(self, graph_13_47):
        dec = decompose_eisenstein(graph_13_47, 3, 6)
        cyc = build_cycle(graph_13_47, 3, dec["lambda0"], dec["lambdas"])
        assert set(cyc["checks"]) == {
            "intersection",
            "closed",
            "in_gross_span",
            "exceptional_multiplicity",
            "multiplicity_coprime_to_p",
        }
        assert cyc["exceptional_multiplicity"] == -2 * dec["lambda0"]
        assert len(cyc["c0"]) == len(graph_13_47.edges)
        assert cyc["checks"]["multiplicity_coprime_to_p"] == (
            dec["lambda0"] % 13 != 0
        )
        # if any tower vector meets an exceptional edge the overlap report
        # names the offending discriminant and the check fails
        assert cyc["checks"]["intersection"] == (not cyc["support_overlap"])
        for key in cyc["support_overlap"]:
            assert int(key) < 0


class TestRunCriterion:
    def test_hypotheses_not_met_13_47(self, tmp_path):
        cert = run_criterion(13, 47, cache_dir=str(tmp_path))
        assert cert["verdict"] == "hypotheses_not_met"
        assert "q_gt_245" in cert["hypotheses_unmet"]
        assert exit_code(cert) == 2
        # the graph statistics are still reported and match the known example
        deg = cert["graph"]["regular_model"]["degree_report"]
        assert deg["all_degrees_match"]
        assert cert["graph"]["vertices"]["count"] == 5
        assert cert["graph"]["edges"]["length_census"] == {"1": 52, "2": 2, "3": 2}

    def test_hypotheses_not_met_7_47(self, tmp_path):
        cert = run_criterion(7, 47, cache_dir=str(tmp_path))
        assert cert["verdict"] == "hypotheses_not_met"
        assert "p_1_mod_4" in cert["hypotheses_unmet"]
        assert cert["ogg_case"] == "none"

    def test_override_runs_machinery(self, tmp_path):
        cert = run_criterion(13, 47, cache_dir=str(tmp_path), override=True)
        assert "decomposition" in cert
        assert cert["checks"]["residual_zero"]
        # at this small instance the tower meets the exceptional edges, an
        # honest named failure
        if cert["verdict"] == "check_failed":
            assert cert["failed_check"] in (
                "intersection",
                "closed",
                "in_gross_span",
                "exceptional_multiplicity",
            )
        else:
            assert cert["verdict"] == "hypotheses_not_met"

    def test_determinism(self, tmp_path):
        c1 = run_criterion(13, 47, cache_dir=str(tmp_path), override=True)
        c2 = run_criterion(13, 47, cache_dir=str(tmp_path), override=True)
        assert certificate_json(c1) == certificate_json(c2)

    def test_exit_codes(self):
        assert exit_code({"verdict": "criterion_satisfied"}) == 0
        assert exit_code({"verdict": "check_failed"}) == 1
        assert exit_code({"verdict": "hypotheses_not_met"}) == 2


class TestCache:
    def test_roundtrip(self, graph_13_11, tmp_path):
        path = cache_store(str(tmp_path), graph_13_11)
        loaded = cache_load(str(tmp_path), 13, 11)
        assert loaded is not None
        assert json.dumps(graph_payload(loaded), sort_keys=True) == json.dumps(
            graph_payload(graph_13_11), sort_keys=True
        )
        with open(path, "rb") as fh:
            blob1 = fh.read()
        cache_store(str(tmp_path), graph_13_11)
        with open(path, "rb") as fh:
            blob2 = fh.read()
        assert blob1 == blob2

    def test_loaded_graph_works(self, graph_13_11, tmp_path):
        from shimura_pq.gross import eisenstein_modular, eisenstein_shimura, s_star, vec_scale

        cache_store(str(tmp_path), graph_13_11)
        g = cache_load(str(tmp_path), 13, 11)
        ae = eisenstein_shimura(g)
        assert s_star(g, ae) == vec_scale(eisenstein_modular(g.vset), 14)

    def test_version_bump_invalidates(self, graph_13_11, tmp_path):
        path = cache_store(str(tmp_path), graph_13_11)
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
        payload["version"] = CACHE_VERSION + 1
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh)
        assert cache_load(str(tmp_path), 13, 11) is None

    def test_corrupt_treated_as_miss(self, tmp_path, capsys):
        path = cache_path(str(tmp_path), 13, 11)
        os.makedirs(str(tmp_path), exist_ok=True)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("{not json")
        assert cache_load(str(tmp_path), 13, 11) is None
        assert "corrupt" in capsys.readouterr().err

    def test_miss_on_absent(self, tmp_path):
        assert cache_load(str(tmp_path), 13, 11) is None

    def test_load_or_build_uses_cache(self, graph_13_11, tmp_path):
        cache_store(str(tmp_path), graph_13_11)
        g, from_cache = load_or_build_graph(13, 11, str(tmp_path))
        assert from_cache
        g2, from_cache2 = load_or_build_graph(13, 11, None)
        assert not from_cache2
        assert graph_payload(g) == graph_payload(g2)
