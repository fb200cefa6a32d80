"""Command-line front end composing the pipeline.

Subcommands: build-basemap, overlay, diversity, convert.  All printing
goes through plain text by default; --json switches stdout to a single
machine-readable object.  Exit status is 0 only when every requested
output was fully written.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .basemap import BaseMapConfig, build_base_map, load_base_map, save_base_map
from .diversity import overlay_diversity
from .emit import (
    encode_clu,
    encode_net,
    encode_paj,
    encode_vec,
    encode_vosviewer_rows,
    render_svg,
    write_citation_matrix,
    write_paj_project,
    write_pajek_vec,
    write_vosviewer_map,
)
from .errors import AllUnmatched, SciomapError
from .ingest import (
    build_overlay,
    parse_analyze_export,
    parse_citation_matrix,
    parse_registry_file,
    read_paj_project,
    read_pajek_clu,
    read_pajek_net,
    read_pajek_vec,
    read_vosviewer_map,
)
from .overlay import DEFAULT_SIZE_MAX, DEFAULT_SIZE_MIN, project
from .shipped import default_registry

__all__ = ["main"]


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _write_outputs(outputs: dict[Path, str]) -> list[Path]:
    """Write all files, removing the ones already written on failure."""
    written: list[Path] = []
    try:
        for path, text in outputs.items():
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding="utf-8", newline="")
            written.append(path)
    except Exception:
        for path in written:
            path.unlink(missing_ok=True)
        raise
    return written


def _config_from_args(args) -> BaseMapConfig:
    config = BaseMapConfig.from_text(_read(args.config)) if args.config else BaseMapConfig()
    overrides = {
        "k_factors": args.k,
        "threshold": args.threshold,
        "resolution6": args.resolution6,
        "resolution4": args.resolution4,
        "seed": args.seed,
        "restarts": args.restarts,
    }
    return replace(config, **{k: v for k, v in overrides.items() if v is not None})


def cmd_build_basemap(args) -> int:
    registry = (
        parse_registry_file(_read(args.registry)) if args.registry else default_registry()
    )
    config = _config_from_args(args)
    matrix = parse_citation_matrix(_read(args.matrix), registry)
    base = build_base_map(matrix, config=config)

    out_dir = Path(args.out)
    written: list[Path] = []
    try:
        written = save_base_map(base, out_dir)
        paj_path = out_dir / "basemap.paj"
        paj_path.write_text(write_paj_project(base), encoding="utf-8", newline="")
        written.append(paj_path)
    except Exception:
        for path in written:
            path.unlink(missing_ok=True)
        raise

    fm = base.factor_model
    ratios = " ".join(f"{r:.4f}" for r in fm.explained_variance_ratio)
    if args.json:
        print(
            json.dumps(
                {
                    "factors": fm.k,
                    "factors_requested": fm.requested_k,
                    "explained_variance_ratio": list(fm.explained_variance_ratio),
                    "total_variance_ratio": fm.total_variance_ratio,
                    "rank_deficient": fm.rank_deficient,
                    "outputs": [str(p) for p in written],
                }
            )
        )
    else:
        print(f"factors: {fm.k} (requested {fm.requested_k})")
        print(f"variance explained per factor: {ratios}")
        print(f"variance explained (total): {fm.total_variance_ratio:.4f}")
        print(f"wrote base map to {out_dir}")
    return 0


def _load_overlay(args):
    base = load_base_map(args.basemap)
    rows = parse_analyze_export(_read(args.analyze))
    try:
        ov = build_overlay(rows, base.registry)
    except AllUnmatched as exc:
        raise AllUnmatched(
            f"{exc} (hint: category schemes changed over time, e.g. 222 vs "
            f"224 active categories; pass the registry matching your export)"
        ) from None
    return base, rows, ov


def cmd_overlay(args) -> int:
    base, rows, ov = _load_overlay(args)
    om = project(base, ov, args.size_min, args.size_max)
    rs = overlay_diversity(base, ov, args.alpha, args.beta)

    out_dir = Path(args.out)
    outputs = {
        out_dir / "wc.vec": write_pajek_vec(ov),
        out_dir / "vos4.csv": write_vosviewer_map(base, ov, 4, args.include_zero_rows),
        out_dir / "vos6.csv": write_vosviewer_map(base, ov, 6, args.include_zero_rows),
        out_dir / "vos19.csv": write_vosviewer_map(base, ov, 19, args.include_zero_rows),
        out_dir / "overlay.svg": render_svg(
            om, partition_choice=args.partition, top_labels=args.top_labels
        ),
    }
    written = _write_outputs(outputs)

    matched_rows = len(rows) - len(ov.unmatched)
    if args.json:
        print(
            json.dumps(
                {
                    "matched_rows": matched_rows,
                    "unmatched_rows": len(ov.unmatched),
                    "matched_records": ov.total_matched,
                    "unmatched_records": ov.total_unmatched,
                    "rao_stirling": rs,
                    "outputs": [str(p) for p in written],
                }
            )
        )
    else:
        print(f"matched rows: {matched_rows} ({ov.total_matched} records)")
        print(f"unmatched rows: {len(ov.unmatched)} ({ov.total_unmatched} records)")
        print(f"Rao-Stirling = {rs:.3f}")
    return 0


def cmd_diversity(args) -> int:
    base, _, ov = _load_overlay(args)
    rs = overlay_diversity(base, ov, args.alpha, args.beta)
    if args.json:
        print(
            json.dumps(
                {
                    "rao_stirling": rs,
                    "alpha": args.alpha,
                    "beta": args.beta,
                    "matched_records": ov.total_matched,
                    "unmatched_records": ov.total_unmatched,
                }
            )
        )
    elif args.full_precision:
        print(repr(rs))
    else:
        print(f"{rs:.3f}")
    return 0


_CONVERTERS = {
    "vec": lambda text, _reg: encode_vec(read_pajek_vec(text)),
    "clu": lambda text, _reg: encode_clu(read_pajek_clu(text)),
    "net": lambda text, _reg: _reencode_net(text),
    "paj": lambda text, _reg: _reencode_paj(text),
    "vosmap": lambda text, _reg: encode_vosviewer_rows(
        [(r.id, r.label, r.x, r.y, r.cluster, r.weight) for r in read_vosviewer_map(text)]
    ),
    "matrix": lambda text, reg: write_citation_matrix(parse_citation_matrix(text, reg)),
}


def _reencode_net(text: str) -> str:
    nd = read_pajek_net(text)
    return encode_net(nd.labels, nd.coords, nd.z, nd.edges)


def _reencode_paj(text: str) -> str:
    pj = read_paj_project(text)
    return encode_paj(
        pj.network_name,
        encode_net(pj.net.labels, pj.net.coords, pj.net.z, pj.net.edges),
        [(name, encode_clu(values)) for name, values in pj.partitions],
        [(name, encode_vec(values)) for name, values in pj.vectors],
    )


def _infer_format(path: Path, text: str) -> str:
    suffix = path.suffix.lower()
    if suffix in (".vec", ".clu", ".net", ".paj"):
        return suffix[1:]
    if suffix == ".csv":
        header = text.splitlines()[0].strip().lower() if text.strip() else ""
        return "vosmap" if header.startswith("id,label") else "matrix"
    raise SciomapError(
        f"cannot infer format of {path.name!r}; pass --format "
        f"(one of {', '.join(sorted(_CONVERTERS))})"
    )


def cmd_convert(args) -> int:
    in_path = Path(args.input)
    text = _read(args.input)
    fmt = args.format or _infer_format(in_path, text)
    if fmt not in _CONVERTERS:
        raise SciomapError(f"unknown format {fmt!r}")
    registry = None
    if fmt == "matrix":
        registry = (
            parse_registry_file(_read(args.registry)) if args.registry else default_registry()
        )
    result = _CONVERTERS[fmt](text, registry)
    _write_outputs({Path(args.output): result})
    print(f"wrote {args.output}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sciomap",
        description="Global base maps of science, document-set overlays, and "
        "Rao-Stirling diversity.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build-basemap", help="build a base map from a citation matrix")
    p_build.add_argument("matrix", help="labeled square citation matrix (CSV or TSV)")
    p_build.add_argument("--registry", help="registry file, one label per line (default: shipped)")
    p_build.add_argument("--config", help="key=value config file")
    p_build.add_argument("--out", default="basemap", help="output directory (default: basemap)")
    p_build.add_argument("--k", type=int, help="number of factors (default 19)")
    p_build.add_argument("--threshold", type=float, help="edge display threshold (default 0.15)")
    p_build.add_argument("--resolution6", type=float, help="starting resolution for the 6-group partition")
    p_build.add_argument("--resolution4", type=float, help="starting resolution for the 4-group partition")
    p_build.add_argument("--seed", type=int, help="random seed (default 0)")
    p_build.add_argument("--restarts", type=int, help="layout/clustering restarts (default 10)")
    p_build.add_argument("--json", action="store_true", help="machine-readable output")
    p_build.set_defaults(func=cmd_build_basemap)

    def overlay_like(p):
        p.add_argument("analyze", help="tab-delimited analyze export")
        p.add_argument("basemap", help="base-map directory")
        p.add_argument("--alpha", type=float, default=1.0, help="proportion exponent (default 1)")
        p.add_argument("--beta", type=float, default=1.0, help="distance exponent (default 1)")
        p.add_argument("--seed", type=int, default=0, help="accepted for reproducible scripting")
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p_overlay = sub.add_parser("overlay", help="project an analyze export onto a base map")
    overlay_like(p_overlay)
    p_overlay.add_argument("--out", default=".", help="output directory (default: current)")
    p_overlay.add_argument(
        "--include-zero-rows", action="store_true", help="keep zero-count categories in vos*.csv"
    )
    p_overlay.add_argument(
        "--partition", type=int, choices=(4, 6, 19), default=19, help="partition coloring the SVG"
    )
    p_overlay.add_argument("--top-labels", type=int, default=10, help="labeled nodes in the SVG")
    p_overlay.add_argument("--size-min", type=float, default=DEFAULT_SIZE_MIN)
    p_overlay.add_argument("--size-max", type=float, default=DEFAULT_SIZE_MAX)
    p_overlay.set_defaults(func=cmd_overlay)

    p_div = sub.add_parser("diversity", help="Rao-Stirling diversity of an analyze export")
    overlay_like(p_div)
    p_div.add_argument(
        "--full-precision", action="store_true", help="print the unrounded value"
    )
    p_div.set_defaults(func=cmd_diversity)

    p_conv = sub.add_parser("convert", help="round-trip a file through its canonical form")
    p_conv.add_argument("input")
    p_conv.add_argument("output")
    p_conv.add_argument("--format", choices=sorted(_CONVERTERS), help="override format inference")
    p_conv.add_argument("--registry", help="registry for matrix conversion (default: shipped)")
    p_conv.set_defaults(func=cmd_convert)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SciomapError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
