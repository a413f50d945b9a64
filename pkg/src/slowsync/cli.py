"""Command line: analyze, bound, enumerate, merge, classify and verify DFAs."""
import argparse
import json
import os
import sys

from .bounds import CapacityError, bounds_report
from .classify import (alphabet_ranges, classify, is_maximal, is_minimal, is_semi_minimal,
                       range_table, render_range, subset_achievers)
from .constructions import FAMILIES, construct, cerny
from .core import DfaError, format_dfa, parse_dfa, state_set
from .power import (is_transitive, max_subset_sync_length, shortest_sync_word,
                    subset_sync_length, sync_length)
from .search import FILTERS, CountTable, SearchConfig, count, enumerate_all, enumerate_dfas
from .store import (config_line, format_record, golden, merge_shards, read_checkpoint,
                    read_corpus, write_checkpoint, write_corpus)

OK, MISMATCH, INPUT, CAPACITY = 0, 1, 2, 3
JOBS_ENV = "SLOWSYNC_JOBS"
LETTERS = "abcdefghijklmnopqrstuvwxyz"


def _read_dfa(path):
    text = sys.stdin.read() if path == "-" else open(path).read()
    return parse_dfa(text)


def _word(word):
    if word is None:
        return "none"
    if all(i < len(LETTERS) for i in word):
        return "".join(LETTERS[i] for i in word) or "(empty)"
    return " ".join(map(str, word))


def cmd_analyze(args, out):
    dfa = _read_dfa(args.file)
    ell = sync_length(dfa)
    out.write("states %d\nalphabet %d\n" % (dfa.n, len(dfa.symbols)))
    out.write("sync_length %s\n" % ("none" if ell is None else ell))
    out.write("word %s\n" % _word(shortest_sync_word(dfa)))
    out.write("transitive %s\n" % str(is_transitive(dfa)).lower())
    if ell is not None:
        out.write("minimal %s\nsemi_minimal %s\n" % (
            str(is_minimal(dfa)).lower(), str(is_semi_minimal(dfa, ell)).lower()))
        if dfa.n <= 5 or args.maximal:
            out.write("maximal %s\n" % str(is_maximal(dfa, ell)).lower())
        else:
            out.write("maximal skipped (pass --maximal to test all %d symbols)\n" % (dfa.n ** dfa.n - 1))
    return OK


def cmd_subset(args, out):
    dfa = _read_dfa(args.file)
    if args.states:
        mask = state_set(int(x) for x in args.states.split(","))
        ell = subset_sync_length(dfa, mask)
        out.write("subset_length %s\n" % ("none" if ell is None else ell))
    else:
        if not 1 <= args.size <= dfa.n:
            raise DfaError("size must lie in 1..n")
        ell = max_subset_sync_length(dfa, args.size)
        out.write("max_subset_length %d %s\n" % (args.size, "none" if ell is None else ell))
    return OK


def cmd_bounds(args, out):
    dfa = _read_dfa(args.file)
    rep = bounds_report(dfa)
    variants = [args.variant] if args.variant else ["L", "Lp", "Lpp"]
    for v in variants:
        out.write("%s %d\n" % (v, rep.value(v, args.improved)))
    return OK


def _jobs(args):
    if args.jobs:
        return args.jobs
    return int(os.environ.get(JOBS_ENV, "1"))


def cmd_enumerate(args, out):
    filters = set(args.filter or [])
    config = SearchConfig(args.states, min_length=args.min_length, filters=filters,
                          bound=None if args.bound == "none" else args.bound,
                          improved=not args.plain, max_alphabet=args.max_alphabet,
                          shard_count=args.shards, shard_index=args.shard,
                          subset_size=args.subset_size, sort_candidates=args.sort)
    if args.out is None:
        if args.shards == 1 and _jobs(args) > 1:
            recs = enumerate_all(config, jobs=_jobs(args))
        else:
            recs = list(enumerate_dfas(config))
        for r in recs:
            out.write(format_record(r) + "\n")
        _write_table(count(recs), sys.stderr)
        return OK
    return _enumerate_to_file(config, args.out, sys.stderr)


def _enumerate_to_file(config, path, log):
    """Append-only enumeration with a checkpoint after every first symbol."""
    ck = read_checkpoint(path)
    seen = set()
    resume = None
    if ck is not None:
        if json.loads(config_line(config))["config"] != ck["config"]:
            raise DfaError("checkpoint %s.ckpt belongs to a different search" % path)
        resume = ck["last_first"]
        for r in read_corpus(path).records:
            seen.add(r.dfa.symbols)
        fh = open(path, "a")
    else:
        fh = open(path, "w")
        fh.write(config_line(config) + "\n")
    pending = []

    def flush(first):
        for r in pending:
            fh.write(format_record(r) + "\n")
        pending.clear()
        fh.flush()
        write_checkpoint(path, config, first)

    with fh:
        for rec in enumerate_dfas(config, resume_after=resume, on_checkpoint=flush, seen=seen):
            pending.append(rec)
    corpus = read_corpus(path)
    write_corpus(path, corpus)
    _write_table(corpus.table(), log)
    return OK


def _write_table(table, out):
    lengths = table.lengths()
    alph = table.alphabets()
    out.write("alphabet | " + " ".join("%6d" % ln for ln in lengths) + " | total\n")
    for a in alph:
        row = [table.counts.get((a, ln), 0) for ln in lengths]
        out.write("%8d | " % a + " ".join("%6s" % (c or "") for c in row) + " | %d\n" % sum(row))
    tot = table.totals()
    out.write("   total | " + " ".join("%6d" % tot.get(ln, 0) for ln in lengths)
              + " | %d\n" % table.total())


def cmd_merge(args, out):
    merged, table = merge_shards(args.files)
    if args.out:
        write_corpus(args.out, merged)
    else:
        for r in merged.records:
            out.write(format_record(r) + "\n")
    _write_table(table, sys.stderr if not args.out else out)
    return OK


def _records_from(paths):
    recs = []
    for p in paths:
        if p.endswith(".jsonl"):
            recs.extend(read_corpus(p).records)
        else:
            dfa = _read_dfa(p)
            from .search import SearchRecord
            recs.append(SearchRecord(dfa, sync_length(dfa)))
    return recs


def cmd_classify(args, out):
    for r in _records_from(args.files):
        if r.sync_length is None:
            out.write("%s not synchronizing\n" % (r.dfa.symbols,))
            continue
        f = classify(r.dfa)
        out.write("alphabet %d length %d transitive %s minimal %s semi_minimal %s maximal %s\n" % (
            len(r.dfa.symbols), r.sync_length, str(is_transitive(r.dfa)).lower(),
            str(f.minimal).lower(), str(f.semi_minimal).lower(), str(f.maximal).lower()))
    return OK


def cmd_ranges(args, out):
    from dataclasses import replace
    recs = []
    for r in _records_from(args.files):
        f = classify(r.dfa)
        recs.append(replace(r, minimal=f.minimal, semi_minimal=f.semi_minimal, maximal=f.maximal))
    out.write(alphabet_ranges(recs).render())
    return OK


def cmd_construct(args, out):
    params = {}
    if args.length is not None:
        params["length"] = args.length
    if args.k is not None:
        params["k"] = args.k
    if args.m is not None:
        params["m"] = args.m
    try:
        dfa = construct(args.family, args.n, **params)
    except KeyError as exc:
        raise DfaError("family %s needs --%s" % (args.family, exc.args[0])) from None
    out.write(format_dfa(dfa))
    return OK


# ---------------------------------------------------------------------------
# verify

def verify_table(name, budget="quick", out=sys.stdout):
    """Recompute a reference table; returns an exit code."""
    g = golden(name)
    if g.budget == "full" and budget != "full":
        out.write("table %s needs --budget full\n" % name)
        return CAPACITY
    out.write("# %s (%s)\n" % (g.name, g.citation))
    diffs = _VERIFIERS[g.kind](g, out)
    for d in diffs:
        out.write("mismatch %s: expected %s, got %s\n" % (d[0], d[1], d[2]))
    out.write("%s %s\n" % (name, "ok" if not diffs else "MISMATCH"))
    return OK if not diffs else MISMATCH


def _verify_om(g, out):
    config = SearchConfig(g.n, min_length=g.params["min_length"], filters={"minimal", "transitive"})
    got = count(enumerate_all(config))
    want = CountTable()
    for (a, ln), c in g.data.items():
        want.add(a, ln, c)
    _write_table(got, out)
    keys = set(got.counts) | set(want.counts)
    return [("alphabet %d length %d" % k, want.counts.get(k, 0), got.counts.get(k, 0))
            for k in sorted(keys) if want.counts.get(k, 0) != got.counts.get(k, 0)]


def _verify_ranges(g, out):
    skip = g.params.get("skip_max", [])
    t = range_table(g.n, skip_max=skip)
    out.write(t.render())
    expected = {ln: ({"min": c["min"], "smin": c["smin"]} if ln in skip else c)
                for ln, c in g.data.items()}
    return [("length %d %s" % (ln, col), want, got) for ln, col, want, got in t.matches(expected)]


def _verify_os(g, out):
    diffs = []
    for (n, s), (length, rows) in sorted(g.data.items()):
        got_len, table, tm = subset_achievers(n, s)
        out.write("n=%d |S|=%d length %d\n" % (n, s, got_len))
        if got_len != length:
            diffs.append(("n=%d |S|=%d length" % (n, s), length, got_len))
        alph = sorted(set(rows) | {a for (a, _) in table.counts})
        for a in alph:
            want = rows.get(a, (0, 0))
            got = (table.counts.get((a, got_len), 0), tm.counts.get((a, got_len), 0))
            out.write("  %d: %d (%d)\n" % (a, got[0], got[1]))
            if want != got:
                diffs.append(("n=%d |S|=%d alphabet %d" % (n, s, a), "%d (%d)" % want, "%d (%d)" % got))
    return diffs


def _verify_cerny(g, out):
    d = cerny(g.n)
    diffs = []
    for (n, s), want in sorted(g.data.items()):
        got = max_subset_sync_length(d, s)
        out.write("|S|=%d %d\n" % (s, got))
        if got != want:
            diffs.append(("|S|=%d" % s, want, got))
    return diffs


def _verify_subset(g, out):
    """Largest subset lengths: exhaustive for |S| < n <= 4, the Cerny witness otherwise."""
    diffs = []
    for (n, s), want in sorted(g.data["lengths"].items()):
        alph = None
        if s < n <= 4:
            got, table, _ = subset_achievers(n, s)
            alph = render_range(table.alphabets())
        else:
            got = max_subset_sync_length(cerny(n), s)
        out.write("n=%d |S|=%d %d%s\n" % (n, s, got, "" if alph is None else "  alphabets " + alph))
        if got != want:
            diffs.append(("n=%d |S|=%d length" % (n, s), want, got))
        expect = g.data["alphabets"].get((n, s))
        if alph is not None and expect is not None and alph != expect:
            diffs.append(("n=%d |S|=%d alphabets" % (n, s), expect, alph))
    return diffs


_VERIFIERS = {"om": _verify_om, "ranges": _verify_ranges, "os": _verify_os,
              "cerny": _verify_cerny, "subset": _verify_subset}


def cmd_verify(args, out):
    return verify_table(args.table, args.budget, out)


# ---------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="slowsync", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="synchronization length, word and flags")
    a.add_argument("file")
    a.add_argument("--maximal", action="store_true", help="test maximality for any n")
    a.set_defaults(func=cmd_analyze)

    a = sub.add_parser("subset", help="subset synchronization lengths")
    a.add_argument("file")
    g = a.add_mutually_exclusive_group(required=True)
    g.add_argument("--size", type=int)
    g.add_argument("--states", help="comma separated states")
    a.set_defaults(func=cmd_subset)

    a = sub.add_parser("bounds", help="upper bounds for all extensions")
    a.add_argument("file")
    a.add_argument("--variant", choices=["L", "Lp", "Lpp"])
    a.add_argument("--improved", action="store_true")
    a.set_defaults(func=cmd_bounds)

    a = sub.add_parser("enumerate", help="search for slowly synchronizing DFAs")
    a.add_argument("--states", type=int, required=True)
    a.add_argument("--min-length", type=int, required=True)
    a.add_argument("--filter", action="append", choices=FILTERS)
    a.add_argument("--bound", choices=["L", "Lp", "Lpp", "none"], default="Lpp")
    a.add_argument("--plain", action="store_true", help="use the plain (unimproved) bound")
    a.add_argument("--max-alphabet", type=int)
    a.add_argument("--subset-size", type=int)
    a.add_argument("--sort", action="store_true", help="sort extension candidates")
    a.add_argument("--shards", type=int, default=1)
    a.add_argument("--shard", type=int, default=0)
    a.add_argument("--jobs", type=int)
    a.add_argument("--out")
    a.set_defaults(func=cmd_enumerate)

    a = sub.add_parser("merge", help="merge shard record files")
    a.add_argument("files", nargs="+")
    a.add_argument("--out")
    a.set_defaults(func=cmd_merge)

    a = sub.add_parser("classify", help="minimal / semi-minimal / maximal flags")
    a.add_argument("files", nargs="+")
    a.set_defaults(func=cmd_classify)

    a = sub.add_parser("ranges", help="alphabet size ranges of record files")
    a.add_argument("files", nargs="+")
    a.set_defaults(func=cmd_ranges)

    a = sub.add_parser("construct", help="emit a DFA of a named family")
    a.add_argument("family", choices=FAMILIES)
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--length", type=int)
    a.add_argument("--k", type=int)
    a.add_argument("--m", type=int)
    a.set_defaults(func=cmd_construct)

    a = sub.add_parser("verify", help="recompute a reference table")
    a.add_argument("--table", required=True)
    a.add_argument("--budget", choices=["quick", "full"], default="quick")
    a.set_defaults(func=cmd_verify)
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INPUT if exc.code else OK
    try:
        return args.func(args, out)
    except CapacityError as exc:
        sys.stderr.write("capacity: %s\n" % exc)
        return CAPACITY
    except (DfaError, OSError, ValueError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return INPUT


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
