"""Synthetic Java method corpora for tests, demos and benchmarks.

Two generators:

* ``fixture_methods`` — a diverse set of lexable methods (strings with
  escapes, comments, generics, lambdas, switches, text blocks, a few inputs
  long enough to force chunked scoring).
* ``toy_samples`` — a memorization corpus.  Every method carries exactly one
  logging statement and sample-unique identifiers, so a retrieval baseline
  trained on the corpus scores it perfectly: each anchor context and each
  mask context occurs in exactly one sample.
"""

from __future__ import annotations

import random

from .corpus import Sample, extract_sample

_LEVELS = ("trace", "debug", "info", "warn", "error", "fatal")
_RECEIVERS = ("log", "logger", "LOG", "mLogger")


def _statement(rng: random.Random, uid: int, depth: int) -> str:
    pad = "    " * depth
    u = f"{uid}{rng.randrange(1000)}"
    simple = [
        f"int v{u} = {rng.randrange(100)};",
        f'String s{u} = "value \\"{u}\\" \\t end";',
        f"double d{u} = {rng.randrange(9)}.{rng.randrange(99)}e-{rng.randrange(9)}d;",
        f"long big{u} = 1_000_{rng.randrange(100):03d}L;",
        f"int hex{u} = 0x{rng.randrange(255):X} | 0b1010;",
        f"char c{u} = '\\n';",
        f"worker{u}.dispatch(payload{u}, {rng.randrange(10)});",
        f"counts{u}[{rng.randrange(5)}] += offset{u}++;",
        f"Map<String, List<Integer>> cache{u} = new HashMap<>();",
        f"Runnable task{u} = () -> queue{u}.poll();",
        f"items{u}.forEach(System.out::println);",
        f"int pick{u} = ready{u} ? {rng.randrange(5)} : -{rng.randrange(5)};",
        f"Object ref{u} = list{u}.get(0); // cached lookup",
        f"/* state {u} */ flags{u} = ~flags{u} & mask{u};",
    ]
    nested = [
        (
            f"if (v{u} > {rng.randrange(10)}) {{\n"
            f"{pad}    total{u} -= step{u};\n"
            f"{pad}}} else {{\n"
            f"{pad}    total{u} += step{u};\n"
            f"{pad}}}"
        ),
        (
            f"for (int i{u} = 0; i{u} < limit{u}; i{u}++) {{\n"
            f"{pad}    acc{u} += i{u} * i{u};\n"
            f"{pad}}}"
        ),
        (
            f"for (String part{u} : parts{u}) {{\n"
            f"{pad}    builder{u}.append(part{u});\n"
            f"{pad}}}"
        ),
        (
            f"while (cursor{u} < end{u}) {{\n"
            f"{pad}    cursor{u} += stride{u};\n"
            f"{pad}}}"
        ),
        (
            f"try {{\n"
            f"{pad}    channel{u}.flush();\n"
            f"{pad}}} catch (IOException e{u}) {{\n"
            f"{pad}    failures{u}++;\n"
            f"{pad}}} finally {{\n"
            f"{pad}    channel{u}.close();\n"
            f"{pad}}}"
        ),
        (
            f"switch (mode{u}) {{\n"
            f"{pad}    case 0:\n"
            f"{pad}        handleZero{u}();\n"
            f"{pad}        break;\n"
            f"{pad}    default:\n"
            f"{pad}        handleOther{u}();\n"
            f"{pad}}}"
        ),
        (
            f'String doc{u} = """\n'
            f"{pad}    multi line {u}\n"
            f'{pad}    """;'
        ),
    ]
    if depth < 2 and rng.random() < 0.3:
        return pad + rng.choice(nested)
    return pad + rng.choice(simple)


def make_method(rng: random.Random, uid: int, statements: int | None = None) -> str:
    count = statements if statements is not None else rng.randrange(3, 9)
    lines = []
    if rng.random() < 0.3:
        lines.append("@Override")
    if rng.random() < 0.2:
        lines.append(f"// refreshes shard {uid}")
    visibility = rng.choice(("public", "private", "protected", ""))
    ret = rng.choice(("void", "int", "String", "List<Integer>"))
    header = f"{visibility} static {ret} process{uid}(int seed{uid}, String tag{uid}) {{".lstrip()
    lines.append(header)
    for _ in range(count):
        lines.append(_statement(rng, uid, depth=1))
    if ret != "void":
        default = {"int": f"seed{uid}", "String": f"tag{uid}", "List<Integer>": "null"}[ret]
        lines.append(f"    return {default};")
    lines.append("}")
    return "\n".join(lines)


def fixture_methods(count: int = 200, seed: int = 1234) -> list[str]:
    """Deterministic corpus of lexable methods; every tenth one is long
    enough (over 512 tokens) to require chunked scoring."""
    rng = random.Random(seed)
    methods = []
    for i in range(count):
        statements = rng.randrange(30, 60) if i % 10 == 9 else None
        methods.append(make_method(rng, uid=i, statements=statements))
    return methods


def _toy_method(i: int, level: str, receiver: str, shape: int, filler: int = 0) -> str:
    message = f"stage {i} finished with {{}}"
    log_line = f'{receiver}.{level}("{message}", total{i});'
    prelude = "".join(
        f"    int pad{i}x{j} = {j} * seed{i}x{j};\n" for j in range(filler)
    )
    if shape == 0:
        # after the first call statement
        body = (
            f"    int total{i} = alpha{i} * {i + 2};\n"
            f"    helper{i}(total{i});\n"
            f"    {log_line}\n"
            f"    return total{i} + {i};\n"
        )
    elif shape == 1:
        # first statement of the method body, right after "{"
        body = (
            f"    {log_line}\n"
            f"    int total{i} = alpha{i} - {i + 1};\n"
            f"    finish{i}(total{i});\n"
            f"    return total{i};\n"
        )
    else:
        # after the closing "}" of an if block
        body = (
            f"    int total{i} = alpha{i};\n"
            f"    if (alpha{i} > {i + 3}) {{\n"
            f"        bump{i}++;\n"
            f"    }}\n"
            f"    {log_line}\n"
            f"    return total{i} * bump{i};\n"
        )
    return f"public int compute{i}(int alpha{i}) {{\n{prelude}{body}}}\n"


def toy_methods(count: int = 50, start: int = 0, filler: int = 0) -> list[str]:
    """``filler`` pad statements (8 tokens each) stretch the methods; around
    80 pushes them past the 512-token split threshold with the target
    statement deep in the tail."""
    return [
        _toy_method(i, _LEVELS[i % len(_LEVELS)], _RECEIVERS[i % len(_RECEIVERS)], i % 3, filler)
        for i in range(start, start + count)
    ]


def toy_samples(count: int = 50, start: int = 0, filler: int = 0) -> list[Sample]:
    """Memorization corpus: extraction of the single log statement per method."""
    return [
        extract_sample(method, 0, sample_id=f"toy-{start + n}", meta={"origin": "synthetic"})
        for n, method in enumerate(toy_methods(count, start, filler))
    ]
