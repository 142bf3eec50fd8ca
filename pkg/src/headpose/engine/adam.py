"""Adam optimizer with bias-corrected first and second moments."""

from dataclasses import dataclass, field

import numpy as np


@dataclass
class AdamState:
    """Optimizer state; moments are congruent with the parameter arrays."""

    learning_rate: float
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-7
    step_count: int = 0
    first_moment: list = field(default_factory=list)
    second_moment: list = field(default_factory=list)


def adam_init(params, learning_rate=0.001, beta1=0.9, beta2=0.999, epsilon=1e-7):
    if learning_rate <= 0:
        raise ValueError("learning_rate must be positive")
    return AdamState(
        learning_rate=learning_rate,
        beta1=beta1,
        beta2=beta2,
        epsilon=epsilon,
        step_count=0,
        first_moment=[np.zeros_like(p) for p in params],
        second_moment=[np.zeros_like(p) for p in params],
    )

def adam_step(params, grads, state):
    """One bias-corrected update; params and state are updated in place.

    Returns the same (params, state) objects for convenience.
    """
    if len(params) != len(grads) or len(params) != len(state.first_moment):
        raise ValueError("params, grads and state must be congruent")
    t = state.step_count + 1
    b1, b2 = state.beta1, state.beta2
    scale = state.learning_rate / (1.0 - b1**t)
    bc2 = 1.0 - b2**t
    for p, g, m, v in zip(params, grads, state.first_moment, state.second_moment):
        if p.shape != g.shape:
            raise ValueError(f"gradient shape {g.shape} != param shape {p.shape}")
        np.multiply(m, b1, out=m)
        m += (1.0 - b1) * g
        np.multiply(v, b2, out=v)
        v += (1.0 - b2) * (g * g)
        denom = np.sqrt(v / bc2)
        denom += state.epsilon
        p -= scale * m / denom
    state.step_count = t
    return params, state
