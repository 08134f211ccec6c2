"""JSONL implementation of IDatasetRepository."""

from pathlib import Path
import shutil
import uuid

from pydantic import ValidationError

from core.application.interfaces import IDatasetRepository
from core.domain.entities import Episode, NavGraph
from core.domain.enums import SplitName
from core.domain.exceptions import DataError, DatasetFormatError
from core.env import FeatureSynth, NavDataset, VocabSpec
from core.infrastructure.logging import get_logger

from ..mappers import WorldLineMapper
from ..records import (
    DATASET_FORMAT_VERSION,
    FeatureSynthRecord,
    ManifestRecord,
    SplitManifest,
    VocabRecord,
    WorldLineRecord,
)

logger = get_logger(__name__)

MANIFEST_NAME = "manifest.json"


class JsonlDatasetRepository(IDatasetRepository):
    """
    Dataset directory layout:

        manifest.json        split membership, counts, graph hashes, generator params
        train.jsonl          one world per line with its train episodes
        val_seen.jsonl       training worlds with their val_seen episodes
        val_unseen.jsonl     unseen worlds with their episodes
    """

    def __init__(self, root: Path) -> None:
        """Initialize repository.

        Args:
            root: dataset directory
        """
        self._root = Path(root)

    @property
    def root(self) -> Path:
        return self._root

    @property
    def manifest_path(self) -> Path:
        return self._root / MANIFEST_NAME

    def exists(self) -> bool:
        return self.manifest_path.is_file()

    def save(self, dataset: NavDataset, force: bool = False) -> Path:
        """Write all split files and the manifest into a temporary sibling, then swap it in."""
        if self._root.exists() and any(self._root.iterdir()) and not force:
            raise DataError(f"Dataset directory {self._root} is not empty; pass --force to overwrite")

        staging = self._root.parent / f".{self._root.name}.tmp-{uuid.uuid4().hex[:8]}"
        staging.mkdir(parents=True)
        try:
            splits = {}
            for split in SplitName:
                episodes = dataset.episodes(split)
                by_world: dict[str, list[Episode]] = {}
                for episode in episodes:
                    by_world.setdefault(episode.world_id, []).append(episode)
                worlds = [w for w in dataset.worlds_for(split) if w.world_id in by_world]
                lines = [
                    WorldLineMapper.to_persistence(w, by_world[w.world_id]).model_dump_json() for w in worlds
                ]
                filename = f"{split.value}.jsonl"
                (staging / filename).write_text("".join(line + "\n" for line in lines), encoding="utf-8")
                splits[split.value] = SplitManifest(
                    file=filename,
                    world_ids=[w.world_id for w in worlds],
                    num_episodes=len(episodes),
                    graph_hashes=[w.content_hash() for w in worlds],
                )

            synth = dataset.feature_synth
            manifest = ManifestRecord(
                format_version=DATASET_FORMAT_VERSION,
                seed=dataset.seed,
                vocab=VocabRecord(
                    num_scene_classes=dataset.vocab.num_scene_classes,
                    num_object_classes=dataset.vocab.num_object_classes,
                ),
                feature_synth=FeatureSynthRecord(
                    seed=synth.seed,
                    sigma=synth.sigma,
                    scene_dim=synth.scene_dim,
                    object_dim=synth.object_dim,
                    fingerprint=synth.fingerprint(),
                ),
                splits=splits,
                env={k: v for k, v in sorted(dataset.params.items())},
                world_split={wid: s.value for wid, s in sorted(dataset.world_split.items())},
            )
            (staging / MANIFEST_NAME).write_text(manifest.model_dump_json(indent=2) + "\n", encoding="utf-8")

            if self._root.exists():
                shutil.rmtree(self._root)
            staging.rename(self._root)
        except BaseException:
            shutil.rmtree(staging, ignore_errors=True)
            raise

        logger.info("dataset_saved: path=%s, worlds=%d", self._root, len(dataset.worlds))
        return self.manifest_path

    def _read_manifest(self) -> ManifestRecord:
        if not self.exists():
            raise DatasetFormatError(f"No dataset manifest at {self.manifest_path}")
        try:
            manifest = ManifestRecord.model_validate_json(self.manifest_path.read_text(encoding="utf-8"))
        except ValidationError as exc:
            raise DatasetFormatError(f"Malformed manifest {self.manifest_path}: {exc}") from exc
        if manifest.format_version != DATASET_FORMAT_VERSION:
            raise DatasetFormatError(
                f"Unsupported dataset format version {manifest.format_version} in {self.manifest_path}"
            )
        return manifest

    def _read_split(self, path: Path) -> list[tuple[NavGraph, list[Episode]]]:
        if not path.is_file():
            raise DatasetFormatError(f"Missing split file {path}")
        worlds = []
        for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
            if not line.strip():
                continue
            try:
                record = WorldLineRecord.model_validate_json(line)
            except ValidationError as exc:
                raise DatasetFormatError(f"{path}:{lineno}: malformed world record: {exc}") from exc
            if record.format_version != DATASET_FORMAT_VERSION:
                raise DatasetFormatError(f"{path}:{lineno}: unsupported format version {record.format_version}")
            try:
                worlds.append(WorldLineMapper.to_domain(record))
            except ValueError as exc:
                raise DatasetFormatError(f"{path}:{lineno}: invalid world: {exc}") from exc
        return worlds

    def load(self) -> NavDataset:
        manifest = self._read_manifest()
        vocab = VocabSpec(manifest.vocab.num_scene_classes, manifest.vocab.num_object_classes)
        fs = manifest.feature_synth
        synth = FeatureSynth.create(
            fs.seed, vocab.num_scene_classes, vocab.num_object_classes, fs.scene_dim, fs.object_dim, fs.sigma
        )
        if synth.fingerprint() != fs.fingerprint:
            raise DatasetFormatError("Feature synthesizer fingerprint does not match the manifest")

        worlds: dict[str, NavGraph] = {}
        splits: dict[SplitName, tuple[Episode, ...]] = {}
        for split in SplitName:
            entry = manifest.splits.get(split.value)
            if entry is None:
                raise DatasetFormatError(f"Manifest has no '{split.value}' split")
            episodes: list[Episode] = []
            loaded = self._read_split(self._root / entry.file)
            if [g.world_id for g, _ in loaded] != entry.world_ids:
                raise DatasetFormatError(f"Split '{split.value}' worlds differ from the manifest")
            for (graph, eps), expected_hash in zip(loaded, entry.graph_hashes):
                if graph.content_hash() != expected_hash:
                    raise DatasetFormatError(f"World {graph.world_id} does not match its manifest hash")
                known = worlds.setdefault(graph.world_id, graph)
                if known.content_hash() != graph.content_hash():
                    raise DatasetFormatError(f"World {graph.world_id} differs between split files")
                for episode in eps:
                    if vocab.count_object_words(episode.instruction) != episode.object_ref_count:
                        raise DatasetFormatError(f"Episode {episode.episode_id}: object_ref_count mismatch")
                episodes.extend(eps)
            if len(episodes) != entry.num_episodes:
                raise DatasetFormatError(
                    f"Split '{split.value}' has {len(episodes)} episodes, manifest says {entry.num_episodes}"
                )
            splits[split] = tuple(episodes)

        seen = set(manifest.splits[SplitName.TRAIN.value].graph_hashes)
        if seen & set(manifest.splits[SplitName.VAL_UNSEEN.value].graph_hashes):
            raise DatasetFormatError("An unseen-split graph also appears in training")

        try:
            world_split = {wid: SplitName(s) for wid, s in manifest.world_split.items()}
        except ValueError as exc:
            raise DatasetFormatError(f"Unknown split in manifest world map: {exc}") from exc
        if set(world_split) != set(worlds):
            raise DatasetFormatError("Manifest world map does not match the split files")

        return NavDataset(
            vocab=vocab,
            feature_synth=synth,
            worlds=worlds,
            world_split=world_split,
            splits=splits,
            seed=manifest.seed,
            params=dict(manifest.env),
        )
