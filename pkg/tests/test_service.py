import io
import json

import numpy as np
import pytest
from fastapi.testclient import TestClient

from movekin import relatedness
from movekin.gapfill import availability_heatmap
from movekin.ingest import build_dataset
from movekin.model import INTERPOLATED, TimeWindow
from movekin.service import RADIUS_BASE, RADIUS_GROWTH, create_app, dump_json
from movekin.smoothing import CurveMode, SmoothingConfig, trace_line
from movekin.synthgen import PlantedPairing, generate

from test_synthgen import small_config

WIRE_TOL = 5e-7  # half an ulp of the fixed 6-decimal wire format


@pytest.fixture(scope="module")
def dataset():
    config = small_config()
    config.planted_pairings = [PlantedPairing("lion-1", "lion-2", 50, 250, tether=200.0)]
    csv_text, _ = generate(config)
    ds, _, _ = build_dataset(io.StringIO(csv_text))
    return ds


@pytest.fixture()
def client(dataset, tmp_path):
    app = create_app(dataset, views_path=str(tmp_path / "views.json"))
    return TestClient(app)


def view_payload(name="night-check", **overrides):
    payload = {
        "name": name,
        "current_slot": 100,
        "duration_slots": 12,
        "curve_mode": "bundle",
        "alpha": 0.75,
        "species_filter": ["lion"],
        "selected_pair": ["lion-1", "lion-2"],
        "focal_animal": "zebra-1",
    }
    payload.update(overrides)
    return payload


class TestDumpJson:
    def test_fixed_float_format(self):
        assert dump_json({"v": 1.5}) == b'{"v":1.500000}'
        assert dump_json({"v": 1 / 3}) == b'{"v":0.333333}'

    def test_ints_bools_null(self):
        assert dump_json({"a": 3, "b": True, "c": None, "d": [1, 2.0]}) == \
            b'{"a":3,"b":true,"c":null,"d":[1,2.000000]}'

    def test_insertion_order_kept(self):
        assert dump_json({"z": 1, "a": 2}) == b'{"z":1,"a":2}'


class TestMeta:
    def test_meta_fields(self, client, dataset):
        body = client.get("/api/meta").json()
        assert body["grid"]["slot_count"] == dataset.grid.slot_count
        assert body["grid"]["step_seconds"] == 7200
        assert body["census"]["total"] == 5
        assert body["census"]["by_species"] == {"lion": 2, "zebra": 3}
        assert abs(body["arena"]["m"] - dataset.M) < WIRE_TOL

    def test_animals_lifespans(self, client, dataset):
        body = client.get("/api/animals").json()
        assert [a["id"] for a in body["animals"]] == dataset.animal_ids
        for entry in body["animals"]:
            track = dataset.tracks[entry["id"]]
            assert entry["first_valid"] == track.first_valid
            assert entry["last_valid"] == track.last_valid
            assert entry["role"] in ("predator", "herbivore", "other")


class TestDeterminism:
    @pytest.mark.parametrize("url", [
        "/api/meta",
        "/api/animals",
        "/api/snapshot?t=120&dur=12",
        "/api/trace?animal=lion-1&t=120&dur=24&mode=catmull-rom&alpha=0.5",
        "/api/relatedness/pair?i=lion-1&j=lion-2&from=50&to=250",
        "/api/relatedness/matrix?from=0&to=100",
        "/api/relatedness/ig?focal=lion-1&t=120&dur=12",
        "/api/uncertainty?buckets=40",
        "/api/episodes?i=lion-1&j=lion-2&threshold=40000&min_len=12&max_dip=3",
        "/api/travel?animal=zebra-1&from=0&to=100",
    ])
    def test_identical_queries_byte_identical(self, client, url):
        first = client.get(url)
        second = client.get(url)
        assert first.status_code == 200, first.text
        assert first.content == second.content


class TestSnapshotContract:
    def test_positions_match_tracks(self, client, dataset):
        body = client.get("/api/snapshot?t=120&dur=6").json()
        assert body["slot"] == 120
        assert body["season"] in ("summer", "autumn", "winter", "spring")
        assert len(body["entities"]) == len(dataset.tracks)
        for entity in body["entities"]:
            track = dataset.tracks[entity["animal"]]
            state = entity["state"]
            if state == "unavailable":
                assert entity["x"] is None and entity["radius"] is None
            else:
                assert abs(entity["x"] - float(track.x[120])) < WIRE_TOL
                assert abs(entity["y"] - float(track.y[120])) < WIRE_TOL
                u = int(track.uncertainty[120])
                assert entity["uncertainty"] == u
                assert abs(entity["radius"] - min(RADIUS_BASE + RADIUS_GROWTH * u, 400.0)) < WIRE_TOL

    def test_interpolated_entity_has_grown_radius(self, client, dataset):
        slot = None
        for a in dataset.animal_ids:
            hits = np.flatnonzero(dataset.tracks[a].state == INTERPOLATED)
            if hits.size:
                slot = int(hits[0])
                animal = a
                break
        assert slot is not None, "fixture should contain interpolated slots"
        body = client.get(f"/api/snapshot?t={slot}&dur=1").json()
        entity = next(e for e in body["entities"] if e["animal"] == animal)
        assert entity["state"] == "interpolated"
        assert entity["radius"] > RADIUS_BASE


class TestPairContract:
    def test_samples_match_engine(self, client, dataset):
        window = TimeWindow(40, 260)
        series = relatedness.pairwise_series(dataset, "lion-1", "lion-2", window)
        body = client.get("/api/relatedness/pair?i=lion-1&j=lion-2&from=40&to=260").json()
        assert body["pair"] == ["lion-1", "lion-2"]
        assert len(body["samples"]) == window.length
        for wire, sample in zip(body["samples"], series.samples):
            assert wire["slot"] == sample.slot
            assert wire["provenance"] == sample.provenance.value
            if sample.value is None:
                assert wire["value"] is None
            else:
                assert abs(wire["value"] - sample.value) < WIRE_TOL


class TestMatrixContract:
    def test_pairs_match_engine(self, client, dataset):
        window = TimeWindow(0, 100)
        matrix = relatedness.relatedness_matrix(dataset, window)
        body = client.get("/api/relatedness/matrix?from=0&to=100").json()
        assert len(body["pairs"]) == len(matrix.entries) == 10
        for wire in body["pairs"]:
            entry = matrix.entry(wire["i"], wire["j"])
            assert abs(wire["coverage"] - entry.coverage) < WIRE_TOL
            assert abs(wire["intensity"] - matrix.intensity(wire["i"], wire["j"])) < WIRE_TOL
            if entry.mean is not None:
                assert abs(wire["mean"] - entry.mean) < WIRE_TOL

    def test_species_filter(self, client):
        body = client.get("/api/relatedness/matrix?from=0&to=100&species=zebra").json()
        assert len(body["pairs"]) == 3  # C(3, 2)
        assert all(w["i"].startswith("zebra") for w in body["pairs"])


class TestIGContract:
    def test_neighbors_match_engine(self, client, dataset):
        summary = relatedness.ig_summary(dataset, "lion-1", 120, 12)
        body = client.get("/api/relatedness/ig?focal=lion-1&t=120&dur=12").json()
        assert body["focal"] == "lion-1"
        wire_by_animal = {n["animal"]: n for n in body["neighbors"]}
        assert set(wire_by_animal) == {n.animal for n in summary.neighbors}
        for entry in summary.neighbors:
            wire = wire_by_animal[entry.animal]
            assert abs(wire["r_min"] - entry.r_min) < WIRE_TOL
            assert abs(wire["r_max"] - entry.r_max) < WIRE_TOL
            if entry.r_now is None:
                assert wire["r_now"] is None and wire["trend"] is None
            else:
                assert abs(wire["r_now"] - entry.r_now) < WIRE_TOL
                assert wire["trend"] == relatedness.trend_sign(entry).value


class TestTraceContract:
    def test_vertices_match_engine(self, client, dataset):
        config = SmoothingConfig(mode=CurveMode.CATMULL_ROM, alpha=0.5)
        window = TimeWindow(97, 120)
        line = trace_line(dataset, "lion-1", window, config)
        body = client.get(
            "/api/trace?animal=lion-1&t=120&dur=24&mode=catmull-rom&alpha=0.5").json()
        assert body["window"]["start_slot"] == 97
        assert len(body["runs"]) == len(line.runs)
        for wire_run, run in zip(body["runs"], line.runs):
            assert len(wire_run["vertices"]) == len(run)
            for wv, v in zip(wire_run["vertices"], run):
                assert abs(wv[0] - v[0]) < WIRE_TOL and abs(wv[1] - v[1]) < WIRE_TOL

    def test_source_flags_present(self, client):
        body = client.get("/api/trace?animal=lion-1&t=120&dur=24&mode=none").json()
        assert all(s["state"] in ("measured", "interpolated") for s in body["source"])


class TestUncertaintyContract:
    def test_rows_match_engine(self, client, dataset):
        rows = availability_heatmap(dataset, 40)
        body = client.get("/api/uncertainty?buckets=40").json()
        assert body["buckets"] == len(rows[0].cells)
        for wire, row in zip(body["rows"], rows):
            assert wire["animal"] == row.animal
            for wc, cell in zip(wire["cells"], row.cells):
                assert wc["max_uncertainty"] == cell.max_uncertainty


class TestEpisodesTravelContract:
    def test_episode_boundaries_match(self, client, dataset):
        threshold = dataset.M - 1000.0
        episodes = relatedness.detect_stable_episodes(
            dataset, "lion-1", "lion-2", threshold, 12, 3)
        body = client.get(
            f"/api/episodes?i=lion-1&j=lion-2&threshold={threshold}&min_len=12&max_dip=3").json()
        assert [(e["start_slot"], e["end_slot"]) for e in body["episodes"]] == \
            [(e.start_slot, e.end_slot) for e in episodes]

    def test_travel_matches(self, client, dataset):
        metrics = relatedness.travel_metrics(dataset, "zebra-1", TimeWindow(0, 100))
        body = client.get("/api/travel?animal=zebra-1&from=0&to=100").json()
        assert abs(body["path_length"] - metrics.path_length) < WIRE_TOL
        assert abs(body["displacement"] - metrics.displacement) < WIRE_TOL


class TestErrors:
    def test_time_out_of_range(self, client):
        resp = client.get("/api/snapshot?t=999999")
        assert resp.status_code == 400
        assert resp.json()["code"] == "time_out_of_range"

    def test_self_pair(self, client):
        resp = client.get("/api/relatedness/pair?i=lion-1&j=lion-1")
        assert resp.status_code == 400
        assert resp.json()["code"] == "self_pair"

    def test_unknown_animal(self, client):
        resp = client.get("/api/travel?animal=ghost-1")
        assert resp.status_code == 404
        assert resp.json()["code"] == "unknown_animal"

    def test_bad_curve_mode(self, client):
        resp = client.get("/api/trace?animal=lion-1&t=10&dur=5&mode=zigzag")
        assert resp.status_code == 400
        assert resp.json()["code"] == "bad_mode"

    def test_bad_window(self, client):
        resp = client.get("/api/relatedness/matrix?from=50&to=10")
        assert resp.status_code == 400
        assert resp.json()["code"] == "window_out_of_range"

    def test_unparseable_query(self, client):
        resp = client.get("/api/snapshot?t=notanumber")
        assert resp.status_code == 400
        assert resp.json()["code"] == "bad_request"


class TestViews:
    def test_put_get_round_trip(self, client):
        payload = view_payload()
        put = client.put("/api/views/night-check", content=json.dumps(payload))
        assert put.status_code == 200, put.text
        got = client.get("/api/views/night-check").json()
        assert got == payload

    def test_unknown_view_404(self, client):
        resp = client.get("/api/views/nope")
        assert resp.status_code == 404
        assert resp.json()["code"] == "unknown_view"

    def test_views_survive_restart(self, dataset, tmp_path):
        store = str(tmp_path / "views.json")
        app1 = create_app(dataset, views_path=store)
        with TestClient(app1) as c1:
            c1.put("/api/views/saved", content=json.dumps(view_payload("saved")))
        app2 = create_app(dataset, views_path=store)
        with TestClient(app2) as c2:
            body = c2.get("/api/views").json()
            assert "saved" in body["views"]
            assert body["views"]["saved"]["alpha"] == 0.75

    def test_last_write_wins(self, client):
        client.put("/api/views/x", content=json.dumps(view_payload("x", alpha=0.25)))
        client.put("/api/views/x", content=json.dumps(view_payload("x", alpha=0.5)))
        assert client.get("/api/views/x").json()["alpha"] == 0.5

    def test_invalid_view_rejected(self, client):
        bad = view_payload("bad", focal_animal="ghost-9")
        resp = client.put("/api/views/bad", content=json.dumps(bad))
        assert resp.status_code == 400
        assert resp.json()["code"] == "bad_view"

    def test_missing_fields_rejected(self, client):
        resp = client.put("/api/views/short", content=json.dumps({"name": "short"}))
        assert resp.status_code == 400
        assert "missing fields" in resp.json()["message"]
