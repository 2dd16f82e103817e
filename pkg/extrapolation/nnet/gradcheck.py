"""Central finite-difference check of the hand-written backward pass."""
import numpy as np

from extrapolation.nnet.mlp import backward, forward, init_mlp

EPSILON = 1e-6
CHECK_SIZES = [3, 5, 4, 2]


def relative_error(analytic, numeric):
    return np.abs(analytic - numeric) / np.maximum(np.abs(analytic) + np.abs(numeric), 1e-5)


def gradcheck_net(net, inputs, projection, eps=EPSILON):
    """Max relative error over every parameter for the loss sum(projection * net(inputs))."""

    def loss(params):
        net.set_parameters(params)
        return float(np.sum(forward(net, inputs)[0] * projection))

    params = [p.copy() for p in net.parameters()]
    _, cache = forward(net, inputs)
    analytic = backward(net, cache, projection).as_list(net)

    worst = 0.0
    for index, param in enumerate(params):
        for flat in range(param.size):
            shifted = [p.copy() for p in params]
            shifted[index].ravel()[flat] += eps
            upper = loss(shifted)
            shifted[index].ravel()[flat] -= 2 * eps
            lower = loss(shifted)
            numeric = (upper - lower) / (2 * eps)
            worst = max(worst, float(relative_error(analytic[index].ravel()[flat], numeric)))

    net.set_parameters(params)
    return worst


def run_gradcheck(rng, activations=("relu", "tanh", "snake"), batch=4):
    """{activation: max relative error} on small random two-hidden-layer nets.

    Snake runs with a learnable, non-unit frequency.
    """
    results = {}
    for activation in activations:
        snake = activation == "snake"
        net = init_mlp(CHECK_SIZES, activation, rng, beta_init=1.3 if snake else 1.0, learn_beta=snake)
        inputs = rng.standard_normal((batch, CHECK_SIZES[0]))
        projection = rng.standard_normal((batch, CHECK_SIZES[-1]))
        results[activation] = gradcheck_net(net, inputs, projection)
    return results
