from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sciomap import (
    AllUnmatched,
    CategoryRegistry,
    DuplicateLabel,
    EmptyExport,
    MalformedRow,
    MissingLabel,
    NegativeCell,
    NotSquare,
    UnknownLabel,
    build_overlay,
    default_registry,
    parse_analyze_export,
    parse_citation_matrix,
    parse_partition_file,
    parse_registry_file,
    write_citation_matrix,
)
from sciomap.ingest import read_partition_rows


class TestParseAnalyzeExport:
    def test_fixture_row_against_manual_split(self):
        line = "BIOCHEMISTRY & MOLECULAR BIOLOGY\t1021\t17.6 %"
        parsed = parse_analyze_export(line)
        # oracle: plain tab split of the same line
        fields = line.split("\t")
        assert parsed == [(fields[0], int(fields[1]))]

    def test_header_only_is_empty(self):
        with pytest.raises(EmptyExport):
            parse_analyze_export("Field\tRecord Count\t% of 5793\n")

    def test_rows_kept_in_file_order(self):
        text = "A\t3\nB\t1\n"
        assert parse_analyze_export(text) == [("A", 3), ("B", 1)]

    def test_title_and_header_preamble_tolerated(self):
        text = "Analyze Results\n\nField\tRecord Count\t% of 99\nRobotics\t42\t42.4 %\n"
        assert parse_analyze_export(text) == [("Robotics", 42)]

    def test_bom_and_crlf_tolerated(self):
        text = "﻿Field\tRecord Count\r\nRobotics\t42\r\nOptics\t7\r\n"
        assert parse_analyze_export(text) == [("Robotics", 42), ("Optics", 7)]

    def test_malformed_row_reports_line_number(self):
        text = "Field\tRecord Count\nRobotics\t42\nOptics\tseven\n"
        with pytest.raises(MalformedRow) as exc:
            parse_analyze_export(text)
        assert exc.value.line_number == 3

    def test_short_row_after_data_is_malformed(self):
        with pytest.raises(MalformedRow):
            parse_analyze_export("Robotics\t42\njust a label\n")

    def test_blank_lines_skipped(self):
        assert parse_analyze_export("\n\nA\t1\n\nB\t2\n\n") == [("A", 1), ("B", 2)]

    def test_float_count_rejected(self):
        with pytest.raises(MalformedRow):
            parse_analyze_export("A\t1\nB\t2.5\n")

    def test_empty_label_after_data_rejected(self):
        with pytest.raises(MalformedRow) as exc:
            parse_analyze_export("A\t1\n\t42\n")
        assert "empty label" in str(exc.value)

    @given(
        st.lists(
            st.tuples(
                st.text(
                    alphabet=st.characters(blacklist_characters="\t\n\r", blacklist_categories=("Cs",)),
                    min_size=1,
                    max_size=20,
                ).filter(lambda s: s.strip()),
                st.integers(min_value=0, max_value=10**6),
            ),
            min_size=1,
            max_size=20,
        )
    )
    def test_row_count_equals_data_lines(self, rows):
        text = "".join(f"{label}\t{count}\n" for label, count in rows)
        parsed = parse_analyze_export(text)
        assert len(parsed) == len(rows)
        assert [c for _, c in parsed] == [c for _, c in rows]


class TestBuildOverlay:
    def test_single_matched_label(self):
        registry = default_registry()
        ov = build_overlay([("Robotics", 5)], registry)
        rid = registry.lookup("Robotics")
        assert ov.counts[rid - 1] == 5
        assert ov.proportions[rid - 1] == 1.0
        assert ov.unmatched == ()

    def test_all_unmatched(self):
        registry = CategoryRegistry(["A", "B"])
        with pytest.raises(AllUnmatched):
            build_overlay([("X", 1)], registry)

    def test_zero_total_matched_counts(self):
        registry = CategoryRegistry(["A", "B"])
        with pytest.raises(AllUnmatched):
            build_overlay([("A", 0)], registry)

    def test_duplicates_merge_by_normalized_key(self):
        registry = CategoryRegistry(["Mathematics", "Robotics"])
        rows = [("Mathematics", 3), ("MATHEMATICS", 1), ("Robotics", 2)]
        ov = build_overlay(rows, registry)

        # oracle: independent normalization + Counter
        def norm(s):
            out = " ".join(s.lower().split())
            return " ".join("&" if t == "and" else t for t in out.split())

        expected: dict[str, int] = {}
        for label, count in rows:
            expected[norm(label)] = expected.get(norm(label), 0) + count
        assert ov.counts[0] == expected["mathematics"] == 4
        assert ov.counts[1] == expected["robotics"] == 2

    @given(
        st.lists(
            st.tuples(st.sampled_from(["Alpha", "ALPHA", "Beta", "Gamma", "Nope"]),
                      st.integers(min_value=0, max_value=1000)),
            min_size=1,
            max_size=30,
        )
    )
    def test_mass_conservation(self, rows):
        registry = CategoryRegistry(["Alpha", "Beta"])
        total_in = sum(c for _, c in rows)
        try:
            ov = build_overlay(rows, registry)
        except AllUnmatched:
            matched_total = sum(
                c for lb, c in rows if lb.lower() in ("alpha", "beta")
            )
            assert matched_total == 0
            return
        assert ov.total_matched + ov.total_unmatched == total_in

    def test_negative_count_rejected(self):
        registry = CategoryRegistry(["A"])
        with pytest.raises(NegativeCell):
            build_overlay([("A", -3)], registry)


class TestParseCitationMatrix:
    def test_two_by_two(self):
        registry = CategoryRegistry(["A", "B"])
        text = "label,A,B\nA,10,2\nB,3,5\n"
        m = parse_citation_matrix(text, registry)
        assert m.values.tolist() == [[10.0, 2.0], [3.0, 5.0]]

    def test_tab_delimited_without_corner(self):
        registry = CategoryRegistry(["A", "B"])
        text = "A\tB\nA\t1\t2\nB\t3\t4\n"
        m = parse_citation_matrix(text, registry)
        assert m.values.tolist() == [[1.0, 2.0], [3.0, 4.0]]

    def test_reordered_to_registry(self):
        registry = CategoryRegistry(["A", "B"])
        text = "label,B,A\nB,5,3\nA,2,10\n"
        m = parse_citation_matrix(text, registry)
        assert m.values.tolist() == [[10.0, 2.0], [3.0, 5.0]]

    def test_unknown_label(self):
        registry = CategoryRegistry(["A", "B"])
        with pytest.raises(UnknownLabel):
            parse_citation_matrix("label,A,B,C\nA,1,2,3\nB,4,5,6\nC,7,8,9\n", registry)

    def test_missing_label(self):
        registry = CategoryRegistry(["A", "B", "C"])
        with pytest.raises(MissingLabel):
            parse_citation_matrix("label,A,B\nA,1,2\nB,3,4\n", registry)

    def test_duplicate_label(self):
        registry = CategoryRegistry(["A", "B"])
        with pytest.raises(DuplicateLabel):
            parse_citation_matrix("label,A,a\nA,1,2\na,3,4\n", registry)

    def test_negative_cell(self):
        registry = CategoryRegistry(["A", "B"])
        with pytest.raises(NegativeCell):
            parse_citation_matrix("label,A,B\nA,1,-1\nB,3,4\n", registry)

    def test_not_square(self):
        registry = CategoryRegistry(["A", "B"])
        with pytest.raises(NotSquare):
            parse_citation_matrix("label,A,B\nA,1,2\n", registry)

    def test_bad_cell_reports_line(self):
        registry = CategoryRegistry(["A", "B"])
        with pytest.raises(MalformedRow) as exc:
            parse_citation_matrix("label,A,B\nA,1,2\nB,x,4\n", registry)
        assert exc.value.line_number == 3

    def test_quoted_labels_with_commas(self):
        registry = CategoryRegistry(["Mathematics, Applied", "Robotics"])
        text = 'label,"Mathematics, Applied",Robotics\n"Mathematics, Applied",1,2\nRobotics,3,4\n'
        m = parse_citation_matrix(text, registry)
        assert m.values.tolist() == [[1.0, 2.0], [3.0, 4.0]]

    def test_roundtrip_full_precision(self, small_registry):
        rng = np.random.default_rng(5)
        values = rng.uniform(0, 1000, size=(10, 10))
        from sciomap import CitationMatrix

        m = CitationMatrix(values, small_registry)
        text = write_citation_matrix(m)
        again = parse_citation_matrix(text, small_registry)
        assert np.array_equal(again.values, m.values)
        assert write_citation_matrix(again) == text


class TestParseRegistryFile:
    def test_id_is_line_number(self):
        reg = parse_registry_file("Alpha\nBeta\nGamma\n")
        assert reg.lookup("beta") == 2

    def test_interior_blank_rejected(self):
        with pytest.raises(MalformedRow) as exc:
            parse_registry_file("Alpha\n\nGamma\n")
        assert exc.value.line_number == 2

    def test_trailing_blank_ok(self):
        assert len(parse_registry_file("Alpha\nBeta\n\n")) == 2

    def test_empty_rejected(self):
        with pytest.raises(EmptyExport):
            parse_registry_file("\n")


class TestPartitionFile:
    def test_rows_and_partition(self):
        registry = CategoryRegistry(["A", "B", "C"])
        text = "label,group,group_name\nA,1,First\nB,2,Second\nC,1,First\n"
        rows = read_partition_rows(text)
        assert rows == [("A", 1, "First"), ("B", 2, "Second"), ("C", 1, "First")]
        p = parse_partition_file(text, registry)
        assert p.assignment == (1, 2, 1)
        assert p.group_names == ("First", "Second")

    def test_without_names(self):
        registry = CategoryRegistry(["A", "B"])
        p = parse_partition_file("label,group\nA,2\nB,1\n", registry)
        assert p.assignment == (2, 1)
        assert p.group_names is None

    def test_unknown_label(self):
        registry = CategoryRegistry(["A"])
        with pytest.raises(UnknownLabel):
            parse_partition_file("label,group\nZ,1\n", registry)

    def test_missing_coverage(self):
        registry = CategoryRegistry(["A", "B"])
        with pytest.raises(MissingLabel):
            parse_partition_file("label,group\nA,1\n", registry)

    def test_duplicate_assignment(self):
        registry = CategoryRegistry(["A", "B"])
        with pytest.raises(DuplicateLabel):
            parse_partition_file("label,group\nA,1\na,2\nB,1\n", registry)

    def test_bad_header(self):
        with pytest.raises(MalformedRow):
            read_partition_rows("category,cluster\nA,1\n")

    def test_non_integer_group(self):
        with pytest.raises(MalformedRow):
            read_partition_rows("label,group\nA,one\n")
