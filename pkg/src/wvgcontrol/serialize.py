"""Game and instance documents.

Both formats are JSON text with every weight-like number written as a
decimal string (never scientific notation, never a JSON number), so
round-trips are bit-exact for weights of any size.

Game document::

    {"weights": ["1", "2", "3"], "quota": "4"}

Instance document: the game fields plus ``distinguished``, ``budget``,
``goal``, ``groups`` (one provenance label per player), optional
``a_players`` / ``b_players`` literal-carrier tables (``null`` marks a
deleted carrier), optional ``bands`` metadata and a free-form ``meta``
object.  Band blocks list their kind, member indices and granularity;
member weights are taken from the game on load and re-validated.
"""

from __future__ import annotations

import json
from typing import Any

from .bands import BandSystem, BlockKind, LightBlock
from .errors import FileFormatError
from .game import Game
from .gadgets import ControlInstance, Goal


def _decimal_string(value: int) -> str:
    return str(int(value))


def _parse_decimal(value: Any, what: str) -> int:
    if not isinstance(value, str) or not value.strip("-").isdigit():
        raise FileFormatError(f"{what} must be a decimal string, got {value!r}")
    return int(value)


def dump_game(game: Game) -> str:
    document = {
        "weights": [_decimal_string(w) for w in game.weights],
        "quota": _decimal_string(game.quota),
    }
    return json.dumps(document, indent=2) + "\n"


def _game_from_document(document: dict) -> Game:
    if "weights" not in document or "quota" not in document:
        raise FileFormatError("game document needs 'weights' and 'quota'")
    weights = document["weights"]
    if not isinstance(weights, list):
        raise FileFormatError("'weights' must be an array of decimal strings")
    return Game(
        tuple(_parse_decimal(w, "weight") for w in weights),
        _parse_decimal(document["quota"], "quota"),
    )


def load_game(text: str) -> Game:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as error:
        raise FileFormatError(f"not valid JSON: {error}") from error
    if not isinstance(document, dict):
        raise FileFormatError("game document must be a JSON object")
    return _game_from_document(document)


def dump_instance(instance: ControlInstance) -> str:
    document: dict[str, Any] = {
        "weights": [_decimal_string(w) for w in instance.game.weights],
        "quota": _decimal_string(instance.game.quota),
        "distinguished": instance.distinguished,
        "budget": instance.budget,
        "goal": instance.goal.value,
    }
    if instance.groups is not None:
        document["groups"] = list(instance.groups)
    if instance.a_players:
        document["a_players"] = list(instance.a_players)
        document["b_players"] = list(instance.b_players)
    if instance.bands is not None:
        document["bands"] = {
            "heavy": sorted(instance.bands.heavy),
            "blocks": [
                {
                    "name": block.name,
                    "kind": block.kind.value,
                    "members": list(block.members),
                    "granularity": _decimal_string(block.granularity),
                }
                for block in instance.bands.blocks
            ],
        }
    if instance.meta:
        document["meta"] = instance.meta
    return json.dumps(document, indent=2) + "\n"


def load_instance(text: str) -> ControlInstance:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as error:
        raise FileFormatError(f"not valid JSON: {error}") from error
    if not isinstance(document, dict):
        raise FileFormatError("instance document must be a JSON object")
    game = _game_from_document(document)
    for key in ("distinguished", "budget", "goal"):
        if key not in document:
            raise FileFormatError(f"instance document needs {key!r}")
    distinguished = document["distinguished"]
    budget = document["budget"]
    if not isinstance(distinguished, int) or not isinstance(budget, int):
        raise FileFormatError("'distinguished' and 'budget' must be integers")
    try:
        goal = Goal(document["goal"])
    except ValueError:
        raise FileFormatError(f"unknown goal {document['goal']!r}")

    groups = None
    if "groups" in document:
        raw = document["groups"]
        if not isinstance(raw, list) or not all(isinstance(x, str) for x in raw):
            raise FileFormatError("'groups' must be an array of strings")
        groups = tuple(raw)

    def carrier_table(key: str) -> tuple[int | None, ...]:
        raw = document.get(key, [])
        if not isinstance(raw, list) or not all(
            x is None or isinstance(x, int) for x in raw
        ):
            raise FileFormatError(f"{key!r} must be an array of ints or nulls")
        return tuple(raw)

    bands = None
    if "bands" in document:
        raw = document["bands"]
        if not isinstance(raw, dict) or "heavy" not in raw or "blocks" not in raw:
            raise FileFormatError("'bands' needs 'heavy' and 'blocks'")
        blocks = []
        for raw_block in raw["blocks"]:
            try:
                kind = BlockKind(raw_block["kind"])
            except (KeyError, ValueError):
                raise FileFormatError(f"bad block kind in {raw_block!r}")
            members = raw_block.get("members")
            if not isinstance(members, list):
                raise FileFormatError("block 'members' must be an array")
            for member in members:
                if not isinstance(member, int):
                    raise FileFormatError("block members must be integers")
                game.check_player(member)
            blocks.append(
                LightBlock(
                    str(raw_block.get("name", kind.value)),
                    kind,
                    tuple(members),
                    tuple(game.weights[m] for m in members),
                    _parse_decimal(raw_block.get("granularity"), "granularity"),
                )
            )
        bands = BandSystem(
            game=game,
            distinguished=distinguished,
            heavy=frozenset(raw["heavy"]),
            blocks=tuple(blocks),
        )

    meta = document.get("meta", {})
    if not isinstance(meta, dict):
        raise FileFormatError("'meta' must be an object")
    return ControlInstance(
        game=game,
        distinguished=distinguished,
        budget=budget,
        goal=goal,
        groups=groups,
        bands=bands,
        a_players=carrier_table("a_players"),
        b_players=carrier_table("b_players"),
        meta=meta,
    )
