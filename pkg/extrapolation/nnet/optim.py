from dataclasses import dataclass, field

import numpy as np


@dataclass
class AdamState:
    step: int = 0
    m: list = field(default_factory=list)
    v: list = field(default_factory=list)

    def to_dict(self):
        return {
            "step": self.step,
            "m": [{"shape": list(a.shape), "data": a.ravel().tolist()} for a in self.m],
            "v": [{"shape": list(a.shape), "data": a.ravel().tolist()} for a in self.v],
        }

    @classmethod
    def from_dict(cls, data):
        def unpack(items):
            return [np.array(item["data"], dtype=float).reshape(item["shape"]) for item in items]

        return cls(step=int(data["step"]), m=unpack(data["m"]), v=unpack(data["v"]))


def adam_step(params, grads, state, learning_rate=1e-3, beta1=0.9, beta2=0.999, eps=1e-8):
    """Bias-corrected Adam update. Returns (new_params, new_state); inputs are not mutated."""
    if len(params) != len(grads):
        raise ValueError(f"{len(params)} parameters but {len(grads)} gradients")
    m = state.m or [np.zeros_like(p) for p in params]
    v = state.v or [np.zeros_like(p) for p in params]
    step = state.step + 1

    new_params, new_m, new_v = [], [], []
    for p, g, m_i, v_i in zip(params, grads, m, v):
        m_i = beta1 * m_i + (1 - beta1) * g
        v_i = beta2 * v_i + (1 - beta2) * g * g
        m_hat = m_i / (1 - beta1 ** step)
        v_hat = v_i / (1 - beta2 ** step)
        new_params.append(p - learning_rate * m_hat / (np.sqrt(v_hat) + eps))
        new_m.append(m_i)
        new_v.append(v_i)

    return new_params, AdamState(step=step, m=new_m, v=new_v)
