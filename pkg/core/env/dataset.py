"""
Generated dataset: vocabulary, feature synthesizer, worlds and split episodes.

Training worlds use seeds base+0 .. base+n_train-1; unseen worlds start at
base+UNSEEN_SEED_OFFSET. A candidate unseen world whose graph hash matches a
training world is skipped.
"""
from dataclasses import dataclass, field

import numpy as np

from core.domain.entities import Episode, NavGraph
from core.domain.enums import SplitName
from core.domain.exceptions import GenerationError
from core.infrastructure.logging import get_logger
from core.settings import EnvSettings

from .episodes import sample_episode
from .features import FeatureSynth
from .vocab import VocabSpec
from .world import generate_world

logger = get_logger(__name__)

UNSEEN_SEED_OFFSET = 100_000
FEATURE_SEED_OFFSET = 7_919
MAX_HASH_RETRIES = 16


@dataclass(eq=False)
class NavDataset:
    vocab: VocabSpec
    feature_synth: FeatureSynth
    worlds: dict[str, NavGraph]
    world_split: dict[str, SplitName]
    splits: dict[SplitName, tuple[Episode, ...]]
    seed: int = 0
    params: dict[str, object] = field(default_factory=dict)

    def episodes(self, split: SplitName | str) -> tuple[Episode, ...]:
        return self.splits.get(SplitName(split), ())

    def world(self, world_id: str) -> NavGraph:
        try:
            return self.worlds[world_id]
        except KeyError:
            raise KeyError(f"Unknown world {world_id!r}") from None

    def worlds_for(self, split: SplitName | str) -> list[NavGraph]:
        """Worlds hosting a split's episodes (training worlds for train and val_seen)."""
        host = SplitName.VAL_UNSEEN if SplitName(split) is SplitName.VAL_UNSEEN else SplitName.TRAIN
        return [w for wid, w in sorted(self.worlds.items()) if self.world_split[wid] is host]

    def graph_hashes(self, split: SplitName | str) -> set[str]:
        return {w.content_hash() for w in self.worlds_for(split)}


def _world(env: EnvSettings, seed: int, world_id: str) -> NavGraph:
    rng = np.random.default_rng(seed)
    num_nodes = int(rng.integers(env.min_nodes, env.max_nodes + 1))
    return generate_world(
        seed,
        num_nodes,
        env.num_scene_classes,
        env.num_object_classes,
        (env.min_objects_per_node, env.max_objects_per_node),
        connect_radius=env.connect_radius,
        target_degree=env.target_degree,
        world_id=world_id,
    )


def _episodes(
    world: NavGraph,
    vocab: VocabSpec,
    env: EnvSettings,
    count: int,
    seed_base: int,
    split: SplitName,
    max_instruction_len: int,
    exclude: set[tuple[int, int]] | None = None,
) -> list[Episode]:
    episodes = []
    for k in range(count):
        episodes.append(
            sample_episode(
                world,
                vocab,
                seed_base + k,
                env.min_path_hops,
                env.max_path_hops,
                object_mention_prob=env.object_mention_prob,
                max_instruction_len=max_instruction_len,
                exclude=exclude or (),
                episode_id=f"{split.value}:{world.world_id}:{k:03d}",
            )
        )
    return episodes


def generate_dataset(env: EnvSettings, seed: int, max_instruction_len: int) -> NavDataset:
    """
    Generate every world and all three splits from one seed.

    Raises:
        GenerationError: if parameters are infeasible or unseen worlds keep
            colliding with training graphs
        SamplingError: if a world admits no episode in the hop range
    """
    vocab = VocabSpec(env.num_scene_classes, env.num_object_classes)
    synth = FeatureSynth.create(
        seed + FEATURE_SEED_OFFSET,
        env.num_scene_classes,
        env.num_object_classes,
        env.scene_feature_dim,
        env.object_feature_dim,
        env.noise_sigma,
    )
    base = seed * 1_000_000

    worlds: dict[str, NavGraph] = {}
    world_split: dict[str, SplitName] = {}
    splits: dict[SplitName, list[Episode]] = {name: [] for name in SplitName}

    train_hashes: set[str] = set()
    for i in range(env.num_train_worlds):
        world = _world(env, base + i, f"train-{i:03d}")
        worlds[world.world_id] = world
        world_split[world.world_id] = SplitName.TRAIN
        train_hashes.add(world.content_hash())

        ep_seed = (base + i) * 10_000
        train_eps = _episodes(
            world, vocab, env, env.train_episodes_per_world, ep_seed, SplitName.TRAIN, max_instruction_len
        )
        splits[SplitName.TRAIN].extend(train_eps)
        used = {(e.start, e.goal) for e in train_eps}
        splits[SplitName.VAL_SEEN].extend(
            _episodes(
                world,
                vocab,
                env,
                env.val_seen_episodes_per_world,
                ep_seed + 5_000,
                SplitName.VAL_SEEN,
                max_instruction_len,
                exclude=used,
            )
        )

    candidate = base + UNSEEN_SEED_OFFSET
    for j in range(env.num_unseen_worlds):
        for _ in range(MAX_HASH_RETRIES):
            world = _world(env, candidate, f"unseen-{j:03d}")
            candidate += 1
            if world.content_hash() not in train_hashes:
                break
            logger.warning("unseen_world_collision: world_id=%s, seed=%d", world.world_id, candidate - 1)
        else:
            raise GenerationError(f"Could not generate an unseen world distinct from training worlds (j={j})")
        worlds[world.world_id] = world
        world_split[world.world_id] = SplitName.VAL_UNSEEN
        splits[SplitName.VAL_UNSEEN].extend(
            _episodes(
                world,
                vocab,
                env,
                env.val_unseen_episodes_per_world,
                candidate * 10_000,
                SplitName.VAL_UNSEEN,
                max_instruction_len,
            )
        )

    logger.info(
        "dataset_generated: seed=%d, worlds=%d, train=%d, val_seen=%d, val_unseen=%d",
        seed,
        len(worlds),
        len(splits[SplitName.TRAIN]),
        len(splits[SplitName.VAL_SEEN]),
        len(splits[SplitName.VAL_UNSEEN]),
    )
    return NavDataset(
        vocab=vocab,
        feature_synth=synth,
        worlds=worlds,
        world_split=world_split,
        splits={name: tuple(eps) for name, eps in splits.items()},
        seed=seed,
        params=env.model_dump(),
    )
