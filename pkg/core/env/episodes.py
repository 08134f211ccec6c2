"""
Episode sampler and instruction grammar.

Instruction for a reference path n_0 .. n_k:

    scene(n_0) objs(n_0) THEN scene(n_1) objs(n_1) ... THEN scene(n_k) objs(n_k)
    STOP_AT scene(n_k) [largest object of n_k]

where objs(n) is a random subset of the node's object words, each kept with
probability object_mention_prob.
"""
from collections.abc import Collection

import numpy as np

from core.domain.entities import Episode, NavGraph
from core.domain.exceptions import SamplingError

from .teacher import teacher_path
from .vocab import VocabSpec

DEFAULT_OBJECT_MENTION_PROB = 0.6


def instruction_for_path(
    graph: NavGraph,
    path: tuple[int, ...],
    vocab: VocabSpec,
    rng: np.random.Generator,
    object_mention_prob: float = DEFAULT_OBJECT_MENTION_PROB,
) -> tuple[int, ...]:
    tokens: list[int] = []
    for i, node in enumerate(path):
        if i:
            tokens.append(vocab.THEN)
        tokens.append(vocab.scene_word(graph.scene_classes[node]))
        for object_class, _size in graph.objects[node]:
            if rng.random() < object_mention_prob:
                tokens.append(vocab.object_word(object_class))

    goal = path[-1]
    tokens.append(vocab.STOP_AT)
    tokens.append(vocab.scene_word(graph.scene_classes[goal]))
    if graph.objects[goal]:
        largest = max(graph.objects[goal], key=lambda obj: (obj[1], -obj[0]))
        tokens.append(vocab.object_word(largest[0]))
    return tuple(tokens)


def sample_episode(
    graph: NavGraph,
    vocab: VocabSpec,
    seed: int,
    min_path_len: int,
    max_path_len: int,
    *,
    object_mention_prob: float = DEFAULT_OBJECT_MENTION_PROB,
    max_instruction_len: int | None = None,
    exclude: Collection[tuple[int, int]] = (),
    episode_id: str | None = None,
) -> Episode:
    """
    Draw a start/goal pair whose shortest path has min_path_len..max_path_len hops.

    Args:
        graph: world to sample on
        vocab: instruction vocabulary
        seed: episode seed; fixes the pair, the object mentions and the noise seed
        min_path_len: minimum hop count of the reference path
        max_path_len: maximum hop count of the reference path
        object_mention_prob: probability of mentioning each object of a path node
        max_instruction_len: pairs whose instruction would be longer are skipped
        exclude: (start, goal) pairs that must not be drawn

    Raises:
        SamplingError: if no pair satisfies the constraints
    """
    if min_path_len < 1 or max_path_len < min_path_len:
        raise SamplingError(f"Invalid hop range [{min_path_len}, {max_path_len}]")
    rng = np.random.default_rng(seed)
    n = graph.num_nodes
    excluded = set(exclude)

    for flat in rng.permutation(n * n):
        start, goal = divmod(int(flat), n)
        if start == goal or (start, goal) in excluded:
            continue
        path = teacher_path(graph, start, goal)
        if not min_path_len <= len(path) - 1 <= max_path_len:
            continue
        instruction = instruction_for_path(graph, path, vocab, rng, object_mention_prob)
        if max_instruction_len is not None and len(instruction) > max_instruction_len:
            continue
        return Episode(
            episode_id=episode_id or f"{graph.world_id}:{seed}",
            world_id=graph.world_id,
            start=start,
            goal=goal,
            path=path,
            instruction=instruction,
            object_ref_count=vocab.count_object_words(instruction),
            noise_seed=int(rng.integers(0, 2**31 - 1)),
        )

    raise SamplingError(
        f"No start/goal pair in world {graph.world_id} has a {min_path_len}..{max_path_len} hop path"
    )
