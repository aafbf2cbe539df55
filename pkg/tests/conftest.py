import json
import os
import random
import socket

import pytest

from codezoom.grammar import Cond, Description, For, If, PseudoProgram, Simple, While
from codezoom.llm import LlmClient, LlmConfig, ScriptedBackend, Transcript


@pytest.fixture(autouse=True, scope="session")
def no_network():
    """The whole suite runs with networking disabled; any connect attempt fails."""
    real_connect = socket.socket.connect

    def blocked(self, address):
        raise RuntimeError(f"network disabled in tests: connection to {address!r}")

    socket.socket.connect = blocked
    try:
        yield
    finally:
        socket.socket.connect = real_connect

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def fixture_path(*parts) -> str:
    return os.path.join(FIXTURES, *parts)


def read_fixture(*parts) -> str:
    with open(fixture_path(*parts), encoding="utf-8") as fh:
        return fh.read()


def load_transcript(name: str) -> Transcript:
    return Transcript.load(fixture_path("transcripts", f"{name}.json"))


def make_client(entries_or_name, max_retries: int = 2) -> LlmClient:
    """Scripted client from a transcript fixture name or an inline entry list."""
    if isinstance(entries_or_name, str):
        transcript = load_transcript(entries_or_name)
    else:
        transcript = Transcript.from_payload([
            e if isinstance(e, dict) else {"response": e} for e in entries_or_name
        ])
    return LlmClient(LlmConfig(max_retries=max_retries), ScriptedBackend(transcript))


def steps_response(statements) -> str:
    from codezoom.grammar import steps_to_interchange
    return json.dumps(steps_to_interchange(statements))


# --- random program generation (oracle for round-trip properties) -------------

_WORDS = [
    "load", "board", "score", "if", "else", "elif", "while", "for", "user",
    "next", "move", "tile", "check", "value", "update", "row", "column",
    "GOAL:", "STEPS:", "read", "write", "10", "x2", "done.", "it's", "a:b",
    "[list]", "50%", "#tag", "done", "loop", "input", "two  spaces",
]


def random_description(rng: random.Random) -> str:
    words = [rng.choice(_WORDS) for _ in range(rng.randint(1, 6))]
    return " ".join(words)


def random_block(rng: random.Random, depth: int, budget: list) -> tuple:
    count = rng.randint(1, 3)
    return tuple(random_statement(rng, depth, budget) for _ in range(count))


def random_statement(rng: random.Random, depth: int, budget: list):
    budget[0] -= 1
    pick = rng.random()
    if depth <= 0 or budget[0] <= 0 or pick < 0.55:
        return Simple(Description(random_description(rng)))
    cond = Cond(Description(random_description(rng)))
    if pick < 0.70:
        return While(cond, random_block(rng, depth - 1, budget))
    if pick < 0.85:
        return For(cond, random_block(rng, depth - 1, budget))
    elifs = tuple(
        (Cond(Description(random_description(rng))), random_block(rng, depth - 1, budget))
        for _ in range(rng.randint(0, 2)))
    else_ = random_block(rng, depth - 1, budget) if rng.random() < 0.5 else None
    return If(cond, random_block(rng, depth - 1, budget), elifs, else_)


def random_program(rng: random.Random, max_depth: int = 5,
                   max_statements: int = 40) -> PseudoProgram:
    budget = [max_statements]
    steps = [random_statement(rng, max_depth - 1, budget)]
    while budget[0] > 0 and rng.random() < 0.6:
        steps.append(random_statement(rng, max_depth - 1, budget))
    return PseudoProgram(Description(random_description(rng)), tuple(steps))


@pytest.fixture
def rng():
    return random.Random(20250809)
