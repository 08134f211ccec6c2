"""
Navigation policy: instruction encoding, per-timestep scoring and state refinement.

One timestep assembles <s_t, psi(I), V_t, G_t>, runs the encoder under the
pattern's mask, scores every scene and object token against the encoded
state token, keeps the best score per view and normalizes over the views
plus stop. The state token is then refined for the next timestep.
"""
from collections.abc import Sequence
import math

import numpy as np

from core.domain.enums import MaskPattern
from core.domain.exceptions import ConfigError, DimensionError, NumericError, StaleCacheError
from core.domain.masks import build_mask, full_mask, layout_from_observation
from core.domain.value_objects import CandidateView, Direction, PolicyVariant, TokenLayout
from core.env.vocab import VocabSpec
from core.nn import FrozenKV, Tensor2, encoder_layer_forward, linear_forward, project_kv
from core.nn import functional as F

from .model import SoatModel
from .state import ActionDistribution, AgentState, Provenance


def resolve_variant(variant: PolicyVariant | MaskPattern | str) -> PolicyVariant:
    if isinstance(variant, PolicyVariant):
        return variant
    return PolicyVariant.for_pattern(MaskPattern.parse(variant) if isinstance(variant, str) else variant)


def encode_instruction(instruction_tokens: Sequence[int], model: SoatModel) -> Tensor2:
    """
    Full-attention encoding of [CLS] w_1 .. w_L [SEP]; returns all L + 2 output rows.

    Raises:
        ValueError: empty or over-long instruction, or a token outside the vocabulary
    """
    tokens = [int(t) for t in instruction_tokens]
    config = model.config
    if not tokens:
        raise ValueError("Instruction must contain at least one token")
    if len(tokens) > config.max_instruction_len:
        raise ValueError(f"Instruction has {len(tokens)} tokens, limit is {config.max_instruction_len}")
    bad = [t for t in tokens if not 0 <= t < config.vocab_size]
    if bad:
        raise ValueError(f"Token ids {bad[:5]} outside vocabulary of size {config.vocab_size}")

    ids = np.array([VocabSpec.CLS, *tokens, VocabSpec.SEP], dtype=np.int64)
    x = F.add(
        F.take_rows(model.word_embeddings, ids),
        F.take_rows(model.position_embeddings, np.arange(len(ids))),
    )
    norm = model.embedding_norm
    x = F.layer_norm(x, norm.gamma, norm.beta, norm.eps)
    mask = full_mask(len(ids))
    for layer in model.layers:
        x = encoder_layer_forward(x, mask.matrix, layer, mask.update_set)
    return x


def instruction_cache(encoded_instruction: Tensor2, model: SoatModel) -> tuple[FrozenKV, ...]:
    """Per-layer keys/values of psi(I) at their token positions 1..L."""
    rows = np.arange(1, encoded_instruction.rows + 1)
    return tuple(project_kv(encoded_instruction, layer, rows) for layer in model.layers)


def init_state(instruction_tokens: Sequence[int], model: SoatModel) -> AgentState:
    """s_0 is the [CLS] output, psi(I) the word-token outputs ([SEP] dropped)."""
    encoded = encode_instruction(instruction_tokens, model)
    length = encoded.rows - 2
    psi_instruction = F.take_rows(encoded, np.arange(1, length + 1))
    return AgentState(
        s=F.take_rows(encoded, [0]),
        encoded_instruction=psi_instruction,
        instruction_kv=instruction_cache(psi_instruction, model),
        t=0,
        model_version=model.version,
    )


def aggregate_views(
    scene_scores: Sequence[float] | np.ndarray,
    object_scores: Sequence[float] | np.ndarray,
    ownership: Sequence[int],
) -> tuple[np.ndarray, list[Provenance]]:
    """
    Per-view max over the scene score and the scores of the view's objects.

    Ties go to the scene token, then to the lowest object index. A scene
    score of -inf marks a view without a scene token.
    """
    scores = np.array(scene_scores, dtype=np.float64)
    objects = np.asarray(object_scores, dtype=np.float64)
    if len(ownership) != len(objects):
        raise ValueError(f"{len(ownership)} owners for {len(objects)} object scores")
    provenance = [Provenance.scene(view) for view in range(len(scores))]
    for position, owner in enumerate(ownership):
        if not 0 <= owner < len(scores):
            raise ValueError(f"Object {position} owned by unknown view {owner}")
        if objects[position] > scores[owner]:
            scores[owner] = objects[position]
            provenance[owner] = Provenance.obj(position)
    return scores, provenance


def refine_state(
    model: SoatModel,
    psi_state: Tensor2,
    scene_scores: Tensor2,
    scene_features: Tensor2,
    encoded_instruction: Tensor2,
    action_direction: Direction,
) -> Tensor2:
    """
    s_{t+1} = [[psi(s_t); F^v * F^l] W_1; a_t] W_2

    F^v = softmax(scene_scores) . scene_features
    F^l = softmax(psi(s_t) psi(I)^T / sqrt(d)) . psi(I)

    Raises:
        DimensionError: on inconsistent widths or counts
    """
    d = model.d_model
    if psi_state.shape != (1, d) or scene_features.cols != d or encoded_instruction.cols != d:
        raise DimensionError(
            f"refine_state widths: state {psi_state.shape}, scene {scene_features.shape}, "
            f"instruction {encoded_instruction.shape}, d={d}"
        )
    if scene_scores.shape != (1, scene_features.rows):
        raise DimensionError(f"{scene_scores.shape} scene scores for {scene_features.rows} scene rows")

    f_v = F.matmul(F.softmax_rows(scene_scores), scene_features)
    language_scores = F.scale(F.matmul(psi_state, F.transpose(encoded_instruction)), 1.0 / math.sqrt(d))
    f_l = F.matmul(F.softmax_rows(language_scores), encoded_instruction)
    hidden = linear_forward(F.concat_cols([psi_state, F.mul(f_v, f_l)]), model.refine_w1)
    a_t = F.constant(action_direction.feature(model.config.direction_dim)[None, :], model.dtype)
    return linear_forward(F.concat_cols([hidden, a_t]), model.refine_w2)


def _check_views(views: Sequence[CandidateView]) -> None:
    if not views or not views[-1].is_stop:
        raise ValueError("Candidate views must end with the stop pseudo-view")
    if any(v.is_stop for v in views[:-1]):
        raise ValueError("Only the last candidate view may be the stop pseudo-view")


def _assemble_tokens(
    state: AgentState, views: Sequence[CandidateView], variant: PolicyVariant, model: SoatModel
) -> tuple[TokenLayout, Tensor2, Tensor2]:
    """Token layout, input tokens and the raw projected scene rows."""
    navigable = views[:-1]
    counts = [v.num_objects if variant.object_features else 0 for v in navigable]
    layout = layout_from_observation(
        state.num_instruction_tokens, len(navigable), counts, variant.has_scene_features
    )
    dtype = model.dtype
    scene_views = views if variant.has_scene_features else views[-1:]
    scene_in = F.constant(np.stack([v.scene_feature for v in scene_views]), dtype)
    raw_scene = linear_forward(scene_in, model.scene_projection)
    parts = [state.s, state.encoded_instruction, raw_scene]

    if layout.num_objects:
        owned = [(v, o) for v in navigable for o in v.object_features]
        obj_in = F.constant(np.stack([o for _, o in owned]), dtype)
        directions = F.constant(
            np.stack([v.direction.feature(model.config.direction_dim) for v, _ in owned]), dtype
        )
        parts.append(
            F.add(
                linear_forward(obj_in, model.object_projection),
                linear_forward(directions, model.direction_projection),
            )
        )
    return layout, F.concat_rows(parts), raw_scene


def _layer_kv(
    state: AgentState, x: Tensor2, layer_index: int, model: SoatModel, frozen_visual: np.ndarray
) -> FrozenKV:
    """Cached instruction keys/values plus this timestep's frozen visual rows."""
    cached = state.instruction_kv[layer_index]
    if frozen_visual.size == 0:
        return cached
    layer = model.layers[layer_index]
    visual = F.take_rows(x, frozen_visual)
    return FrozenKV(
        rows=np.concatenate([cached.rows, frozen_visual]),
        keys=F.concat_rows([cached.keys, linear_forward(visual, layer.key)]),
        values=F.concat_rows([cached.values, linear_forward(visual, layer.value)]),
    )


def encode_step(
    state: AgentState,
    views: Sequence[CandidateView],
    variant: PolicyVariant,
    model: SoatModel,
    use_cache: bool = True,
) -> tuple[TokenLayout, Tensor2, Tensor2]:
    """Run the encoder stack for one timestep; returns (layout, outputs, raw scene rows)."""
    if use_cache and state.model_version != model.version:
        raise StaleCacheError(
            f"Instruction cache built at model version {state.model_version}, model is at {model.version}"
        )
    layout, x, raw_scene = _assemble_tokens(state, views, variant, model)
    mask = build_mask(variant.pattern, layout)
    frozen_visual = np.setdiff1d(np.arange(layout.scene_range.start, layout.num_tokens), mask.update_rows)
    for i, layer in enumerate(model.layers):
        kv = _layer_kv(state, x, i, model, frozen_visual) if use_cache else None
        x = encoder_layer_forward(x, mask.matrix, layer, mask.update_set, frozen_kv=kv)
    return layout, x, raw_scene


def step(
    state: AgentState,
    views: Sequence[CandidateView],
    variant: PolicyVariant | MaskPattern,
    model: SoatModel,
    *,
    action: int | None = None,
    rng: np.random.Generator | None = None,
    use_cache: bool = True,
) -> tuple[ActionDistribution, AgentState]:
    """
    One navigation timestep.

    Args:
        state: current agent state
        views: candidate views, stop pseudo-view last
        variant: policy variant or bare mask pattern (CLI defaults)
        model: parameters
        action: teacher-forced action; otherwise sampled from rng, or greedy
        rng: sampling generator (policy-gradient rollouts)
        use_cache: reuse cached instruction keys/values

    Returns:
        the action distribution (with the chosen action) and the refined state

    Raises:
        NumericError: non-finite scores
        StaleCacheError: cached keys/values predate a parameter update
    """
    variant = resolve_variant(variant)
    _check_views(views)
    layout, out, raw_scene = encode_step(state, views, variant, model, use_cache)

    inv_sqrt_d = 1.0 / math.sqrt(model.d_model)
    psi_s = F.take_rows(out, [layout.state_index])
    scene_rows = raw_scene if variant.raw_scene_scores else F.take_rows(out, np.array(layout.scene_range))
    scene_scores = F.scale(F.matmul(psi_s, F.transpose(scene_rows)), inv_sqrt_d)

    num_scene = layout.num_scene_slots
    score_parts, row_parts = [scene_scores], [scene_rows]
    if layout.num_objects:
        object_rows = F.take_rows(out, np.array(layout.object_range))
        score_parts.append(F.scale(F.matmul(psi_s, F.transpose(object_rows)), inv_sqrt_d))
        row_parts.append(object_rows)
    empty_col = num_scene + layout.num_objects
    if not variant.has_scene_features:
        score_parts.append(model.empty_view_score)
        row_parts.append(F.constant(np.zeros((1, model.d_model)), model.dtype))
    all_scores = F.concat_cols(score_parts) if len(score_parts) > 1 else scene_scores
    if not all_scores.is_finite():
        raise NumericError(f"Non-finite attention scores at t={state.t}")

    num_views = layout.num_views
    data = all_scores.data[0]
    if variant.has_scene_features:
        view_scene = data[: num_views + 1].copy()
        scene_cols = list(range(num_views + 1))
    else:
        view_scene = np.array(
            [data[empty_col] if not layout.objects_of_view(v) else -np.inf for v in range(num_views)]
            + [data[layout.stop_index - layout.scene_range.start]]
        )
        scene_cols = [empty_col] * num_views + [0]

    if variant.view_aggregation:
        _, provenance = aggregate_views(
            view_scene, data[num_scene : num_scene + layout.num_objects], layout.object_owner
        )
    else:
        provenance = [Provenance.scene(v) for v in range(num_views + 1)]

    winners = []
    for view, prov in enumerate(provenance):
        if prov.kind == "object":
            winners.append(num_scene + prov.index)
        else:
            winners.append(scene_cols[view])
            if scene_cols[view] == empty_col and view < num_views:
                provenance[view] = Provenance.empty()

    logits = F.take_cols(all_scores, winners)
    log_probs = F.log_softmax_rows(logits)
    chosen = _select(logits.data[0], np.exp(log_probs.data[0]), action, rng)

    if variant.has_scene_features:
        refine_scores, refine_rows = scene_scores, scene_rows
    else:
        refine_scores, refine_rows = logits, F.take_rows(F.concat_rows(row_parts), winners)
    s_next = refine_state(
        model, psi_s, refine_scores, refine_rows, state.encoded_instruction, views[chosen].direction
    )
    distribution = ActionDistribution(
        logits=logits, log_probs=log_probs, provenance=tuple(provenance), chosen=chosen
    )
    return distribution, state.advance(s_next)


def _select(
    logits: np.ndarray, probabilities: np.ndarray, action: int | None, rng: np.random.Generator | None
) -> int:
    if action is not None:
        if not 0 <= action < len(logits):
            raise ValueError(f"Action {action} outside 0..{len(logits) - 1}")
        return int(action)
    if rng is not None:
        p = probabilities.astype(np.float64)
        return int(rng.choice(len(p), p=p / p.sum()))
    return int(np.argmax(logits))


def cached_step_equivalence(
    state: AgentState,
    views: Sequence[CandidateView],
    variant: PolicyVariant | MaskPattern,
    model: SoatModel,
) -> float:
    """
    Max absolute deviation between a cached step and a full recompute.

    Compares logits, log-probabilities and the refined state token; both
    runs take the same action.

    Raises:
        ConfigError: for patterns without a frozen visual group
    """
    variant = resolve_variant(variant)
    if not variant.pattern.is_selective:
        raise ConfigError(
            f"Cached step equivalence needs a selective pattern, got '{variant.pattern.value}'"
        )
    cached, cached_state = step(state, views, variant, model, use_cache=True)
    naive, naive_state = step(state, views, variant, model, action=cached.chosen, use_cache=False)
    return float(
        max(
            np.max(np.abs(cached.logits.data - naive.logits.data)),
            np.max(np.abs(cached.log_probs.data - naive.log_probs.data)),
            np.max(np.abs(cached_state.s.data - naive_state.s.data)),
        )
    )
