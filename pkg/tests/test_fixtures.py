"""Tolerant loader for externally published judgment tables."""

from prosodyqa.fixtures import load_published_judgments, rating_matrix


def test_csv_column_mapping_and_engine_detection(tmp_path):
    (tmp_path / "judgments_ibm_lisa.csv").write_text(
        "_worker_id,unit_id,prosody_modification,informativeness,elocution,"
        "interruptions,audio_length,typed_answer\n"
        "101,u1,rate,3,2,0,-1,jimi hendrix\n"
        "102,u1,rate,4,2,0,0,jimmy hendrix\n"
        "101,u2,pause,2,1,1,1,aretha franklin\n",
        encoding="utf-8",
    )
    (tmp_path / "wavenet_google.csv").write_text(
        "worker,item,condition,informative_score,elocution,interrupt,length,short_answer\n"
        "9,g1,emphasis,4,2,0,0,mercury\n",
        encoding="utf-8",
    )
    (tmp_path / "readme.txt").write_text("not data", encoding="utf-8")

    per_engine = load_published_judgments(tmp_path)
    assert set(per_engine) == {"ibm", "google"}
    assert len(per_engine["ibm"]) == 3
    assert len(per_engine["google"]) == 1
    row = per_engine["ibm"][0]
    assert row["informativeness"] == 3
    assert row["length_rating"] == -1
    assert row["typed_key"] == "jimi hendrix"
    assert row["kind"] == "rate"


def test_rating_matrix_shape(tmp_path):
    rows = [
        {"worker_id": "a", "item_id": "u1", "informativeness": 3},
        {"worker_id": "b", "item_id": "u1", "informativeness": 4},
        {"worker_id": "a", "item_id": "u2", "informativeness": 2},
    ]
    matrix = rating_matrix(rows, "informativeness")
    assert matrix == [[3, 4], [2, None]]


def test_jsonl_files_supported(tmp_path):
    (tmp_path / "ibm_rows.jsonl").write_text(
        '{"worker": "w1", "unit": "u1", "informativeness": 2}\n', encoding="utf-8"
    )
    per_engine = load_published_judgments(tmp_path)
    assert per_engine["ibm"][0]["informativeness"] == 2
