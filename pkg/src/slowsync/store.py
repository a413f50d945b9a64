"""Record streams, shard merging and the reference tables used by ``verify``."""
import json
import os
from dataclasses import asdict, dataclass, field

from .core import Dfa, DfaError, canonical_symbols
from .search import CountTable, SearchConfig, SearchRecord

FLAG_NAMES = ("transitive", "minimal", "semi_minimal", "maximal")


# ---------------------------------------------------------------------------
# record lines

def format_record(rec):
    obj = {
        "n": rec.dfa.n,
        "alphabet": rec.alphabet,
        "sync_length": rec.sync_length,
        "flags": {k: getattr(rec, k) for k in FLAG_NAMES if getattr(rec, k) is not None},
        "symbols": [list(t) for t in rec.dfa.symbols],
    }
    if rec.subset_size is not None:
        obj["subset_size"] = rec.subset_size
        obj["subset_length"] = rec.subset_length
    return json.dumps(obj, separators=(",", ":"))


def parse_record(line):
    try:
        obj = json.loads(line)
        dfa = Dfa(obj["n"], tuple(tuple(t) for t in obj["symbols"]))
    except (ValueError, KeyError, TypeError) as exc:
        raise DfaError("bad record line: %s" % exc) from None
    if len(dfa.symbols) != obj["alphabet"]:
        raise DfaError("alphabet field disagrees with the symbol list")
    flags = {k: obj["flags"][k] for k in FLAG_NAMES if k in obj.get("flags", {})}
    return SearchRecord(dfa, obj["sync_length"], subset_size=obj.get("subset_size"),
                        subset_length=obj.get("subset_length"), **flags)


def config_line(config):
    d = asdict(config)
    d["filters"] = sorted(d["filters"])
    return json.dumps({"config": d}, separators=(",", ":"), sort_keys=True)


def parse_config(line):
    d = json.loads(line)["config"]
    d["filters"] = frozenset(d["filters"])
    return SearchConfig(**d)


@dataclass
class Corpus:
    config: SearchConfig | None
    records: list = field(default_factory=list)

    def table(self):
        t = CountTable()
        for r in self.records:
            t.add(r.alphabet, r.length)
        return t


def read_corpus(path):
    """Read a record file; the optional first line carries the search config."""
    config = None
    records = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith('{"config"'):
                config = parse_config(line)
                continue
            records.append(parse_record(line))
    return Corpus(config, records)


def write_corpus(path, corpus):
    with open(path, "w") as fh:
        if corpus.config is not None:
            fh.write(config_line(corpus.config) + "\n")
        for r in sorted(corpus.records, key=SearchRecord.sort_key):
            fh.write(format_record(r) + "\n")


def _same_search(a, b):
    return a.n == b.n and a.min_length == b.min_length and a.filters == b.filters \
        and a.subset_size == b.subset_size and a.shard_count == b.shard_count \
        and a.max_alphabet == b.max_alphabet


def merge_corpora(corpora):
    """Union of shard corpora with canonical deduplication."""
    config = None
    for c in corpora:
        if c.config is None:
            continue
        if config is None:
            config = c.config
        elif not _same_search(config, c.config):
            raise DfaError("shards come from different searches")
    best = {}
    for c in corpora:
        for r in c.records:
            key = (r.dfa.n, canonical_symbols(r.dfa.n, r.dfa.symbols))
            best.setdefault(key, r)
    if config is not None:
        config = SearchConfig(**{**asdict(config), "shard_index": 0, "shard_count": 1})
    return Corpus(config, sorted(best.values(), key=SearchRecord.sort_key))


def merge_shards(paths):
    """Merge shard files; returns the merged corpus and its count table."""
    merged = merge_corpora([read_corpus(p) for p in paths])
    return merged, merged.table()


# ---------------------------------------------------------------------------
# checkpoints

def checkpoint_path(path):
    return path + ".ckpt"


def read_checkpoint(path):
    ck = checkpoint_path(path)
    if not os.path.exists(ck):
        return None
    with open(ck) as fh:
        return json.load(fh)


def write_checkpoint(path, config, last_first):
    tmp = checkpoint_path(path) + ".tmp"
    with open(tmp, "w") as fh:
        json.dump({"config": json.loads(config_line(config))["config"], "last_first": last_first}, fh)
    os.replace(tmp, checkpoint_path(path))


# ---------------------------------------------------------------------------
# reference tables

@dataclass(frozen=True)
class Golden:
    name: str
    kind: str
    n: int
    citation: str
    data: dict
    budget: str = "quick"
    params: dict = field(default_factory=dict)


def _cells(rows):
    """{alphabet: {length: count}} to {(alphabet, length): count}."""
    return {(a, ln): c for a, row in rows.items() for ln, c in row.items()}


OM3 = _cells({2: {4: 2, 3: 3, 2: 3}, 3: {4: 2}})
OM4 = _cells({
    2: {9: 2, 8: 5, 7: 11, 6: 20, 5: 49, 4: 52, 3: 57, 2: 18},
    3: {9: 2, 8: 19, 7: 50, 6: 113, 5: 114, 4: 188, 3: 84},
    4: {8: 2, 7: 5, 6: 5, 5: 4},
})
OM5_TOP = _cells({
    2: {16: 1, 15: 4, 14: 11, 13: 23},
    3: {16: 1, 15: 8, 14: 31, 13: 89},
    4: {15: 1, 14: 4, 13: 42},
    5: {13: 2},
})
OM6_TOP = _cells({2: {25: 2}})

# rows: length -> column -> alphabet sizes
R2 = {1: {"all": "1--3", "min": "1", "smin": "1", "max": "3", "max_min": "", "max_smin": ""}}
R3 = {
    4: {"all": "2--5", "min": "2--3", "smin": "2--3", "max": "5", "max_min": "", "max_smin": ""},
    3: {"all": "2--9", "min": "2", "smin": "2", "max": "9", "max_min": "", "max_smin": ""},
    2: {"all": "1--23", "min": "1--2", "smin": "1--2", "max": "23", "max_min": "", "max_smin": ""},
    1: {"all": "1--26", "min": "1", "smin": "1", "max": "26", "max_min": "", "max_smin": ""},
}
_R4_MAX4 = ", ".join(str(a) for a in range(23, 54, 2)) + ", 59"
R4 = {
    9: {"all": "2--5", "min": "2--3", "smin": "2--3", "max": "2--3, 5", "max_min": "2--3", "max_smin": "2--3"},
    8: {"all": "2--8", "min": "2--4", "smin": "2--4", "max": "4--8", "max_min": "", "max_smin": ""},
    7: {"all": "2--17", "min": "2--4", "smin": "2--4", "max": "2, 4--9, 17", "max_min": "2", "max_smin": "2"},
    6: {"all": "2--17", "min": "2--4", "smin": "2--4", "max": "5--11, 13--15, 17", "max_min": "", "max_smin": ""},
    5: {"all": "2--41", "min": "2--4", "smin": "2--5", "max": "11--25, 35, 41", "max_min": "", "max_smin": ""},
    4: {"all": "2--59", "min": "2--3", "smin": "2--4", "max": _R4_MAX4, "max_min": "", "max_smin": ""},
    3: {"all": "1--167", "min": "1--3", "smin": "1--3",
        "max": "79, 83, 91, 101, 103, 119, 123, 127, 147, 167", "max_min": "", "max_smin": ""},
    2: {"all": "1--251", "min": "1--2", "smin": "1--2", "max": "251", "max_min": "", "max_smin": ""},
    1: {"all": "1--255", "min": "1", "smin": "1", "max": "255", "max_min": "", "max_smin": ""},
}

# subset achievers: (n, |S|) -> (length, {alphabet: (count, transitive minimal count)})
OS = {
    (3, 2): (3, {2: (6, 5), 3: (23, 2), 4: (30, 0), 5: (20, 0), 6: (7, 0), 7: (1, 0)}),
    (4, 2): (6, {2: (3, 3), 3: (10, 4), 4: (9, 0), 5: (5, 0), 6: (1, 0)}),
    (4, 3): (8, {2: (3, 3), 3: (11, 4), 4: (13, 0), 5: (6, 0), 6: (1, 0)}),
    (5, 2): (10, {2: (1, 1), 3: (1, 1)}),
    (5, 3): (13, {2: (2, 2), 3: (2, 2), 4: (1, 0)}),
    (5, 4): (15, {2: (1, 1), 3: (2, 2), 4: (1, 0)}),
}

# largest subset synchronization length per (n, |S|)
SUBSET_LENGTHS = {
    (2, 2): 1, (3, 2): 3, (3, 3): 4, (4, 2): 6, (4, 3): 8, (4, 4): 9,
    (5, 2): 10, (5, 3): 13, (5, 4): 15, (5, 5): 16,
    (6, 2): 15, (6, 3): 20, (6, 4): 22, (6, 5): 24, (6, 6): 25,
    (7, 2): 21, (7, 3): 28, (7, 4): 31, (7, 5): 33, (7, 6): 35, (7, 7): 36,
}

# alphabet ranges of the DFAs reaching those lengths ("all" column)
SUBSET_ALPHABETS = {
    (2, 2): "1--3", (3, 2): "2--7", (3, 3): "2--5", (4, 2): "2--6", (4, 3): "2--6",
    (4, 4): "2--5", (5, 2): "2--3", (5, 3): "2--4", (5, 4): "2--4", (5, 5): "2--3",
}

GOLDENS = {g.name: g for g in [
    Golden("om3", "om", 3, "transitive minimal DFAs, 3 states, all lengths (10 classes)", OM3, params={"min_length": 1}),
    Golden("om4", "om", 4, "transitive minimal DFAs, 4 states, all lengths (800 classes)", OM4, params={"min_length": 1}),
    Golden("om5", "om", 5, "transitive minimal DFAs, 5 states, lengths 13..16", OM5_TOP, params={"min_length": 13}),
    Golden("om6", "om", 6, "transitive minimal DFAs, 6 states, length 25", OM6_TOP, budget="full",
           params={"min_length": 25}),
    Golden("r2", "ranges", 2, "alphabet ranges by length, 2 states", R2),
    Golden("r3", "ranges", 3, "alphabet ranges by length, 3 states", R3),
    Golden("r4", "ranges", 4, "alphabet ranges by length, 4 states (max column for lengths 1, 2 and >= 4)", R4,
           budget="full", params={"skip_max": [3]}),
    Golden("os3", "os", 3, "largest subset lengths and their achievers, 3 states", {k: v for k, v in OS.items() if k[0] == 3}),
    Golden("os4", "os", 4, "largest subset lengths and their achievers, 4 states", {k: v for k, v in OS.items() if k[0] == 4}),
    Golden("os5", "os", 5, "largest subset lengths and their achievers, 5 states", {k: v for k, v in OS.items() if k[0] == 5}, budget="full"),
    Golden("n7", "cerny", 7, "subset lengths of the Cerny automaton, 7 states",
           {k: v for k, v in SUBSET_LENGTHS.items() if k[0] == 7}),
    Golden("subset", "subset", 0, "Subset synchronization range table (length column and 'all' for n <= 4)",
           {"lengths": SUBSET_LENGTHS, "alphabets": SUBSET_ALPHABETS}),
]}


def golden(name):
    try:
        return GOLDENS[name]
    except KeyError:
        raise DfaError("unknown table %r (known: %s)" % (name, ", ".join(sorted(GOLDENS)))) from None
