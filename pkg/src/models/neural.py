"""
Multilayer perceptron (ANN)
"""

import logging

import numpy as np
from scipy.special import expit

from .base import Classifier, Standardizer, as_matrix
from .schemas import ANNParams, ModelKind

logger = logging.getLogger(__name__)


class MultilayerPerceptron(Classifier):
    """
    ReLU hidden layers with a single sigmoid output unit, trained by
    mini-batch gradient descent on binary cross-entropy (+ optional L2)
    """

    kind = ModelKind.ANN

    def __init__(self, params: ANNParams, seed: int = 0):
        super().__init__(params, seed)

    def initialize(self, n_features: int, rng: np.random.Generator) -> None:
        """
        He-normal weights, zero biases
        """
        sizes = [n_features] + [self.params.hidden_units] * self.params.hidden_layers + [1]
        self.weights_ = [rng.normal(0.0, np.sqrt(2.0 / fan_in), size=(fan_in, fan_out)) for fan_in, fan_out in zip(sizes[:-1], sizes[1:])]
        self.biases_ = [np.zeros(fan_out) for fan_out in sizes[1:]]

    def forward(self, Z: np.ndarray) -> tuple[list[np.ndarray], list[np.ndarray]]:
        """
        Pre-activations and activations of every layer; activations[0] is the input
        """
        activations, pre = [Z], []
        for i, (W, b) in enumerate(zip(self.weights_, self.biases_)):
            z = activations[-1] @ W + b
            pre.append(z)
            activations.append(z if i == len(self.weights_) - 1 else np.maximum(z, 0.0))
        return pre, activations

    def loss_and_gradients(self, Z: np.ndarray, y: np.ndarray) -> tuple[float, list[np.ndarray], list[np.ndarray]]:
        """
        Mean cross-entropy with logits and its gradients w.r.t. weights and biases
        """
        y = np.asarray(y, dtype=float).reshape(-1, 1)
        n = len(y)
        pre, activations = self.forward(Z)
        logits = pre[-1]
        l2 = self.params.l2
        loss = float(np.mean(np.logaddexp(0.0, logits) - y * logits))
        loss += 0.5 * l2 * sum(float(np.sum(W * W)) for W in self.weights_)

        grad_W = [np.zeros_like(W) for W in self.weights_]
        grad_b = [np.zeros_like(b) for b in self.biases_]
        delta = (expit(logits) - y) / n
        for layer in range(len(self.weights_) - 1, -1, -1):
            grad_W[layer] = activations[layer].T @ delta + l2 * self.weights_[layer]
            grad_b[layer] = delta.sum(axis=0)
            if layer:
                delta = (delta @ self.weights_[layer].T) * (pre[layer - 1] > 0)
        return loss, grad_W, grad_b

    def fit(self, X, y, categorical=None):
        X = as_matrix(X)
        y = np.asarray(y, dtype=float)
        p = self.params
        rng = np.random.default_rng(self.seed)
        self.scaler_ = Standardizer().fit(X)
        Z = self.scaler_.transform(X)
        self.initialize(Z.shape[1], rng)
        self.converged_ = False
        self.loss_history_ = []
        previous = np.inf

        for _ in range(p.epochs):
            order = rng.permutation(len(y))
            for start in range(0, len(y), p.batch_size):
                batch = order[start:start + p.batch_size]
                _, grad_W, grad_b = self.loss_and_gradients(Z[batch], y[batch])
                for layer in range(len(self.weights_)):
                    self.weights_[layer] = self.weights_[layer] - p.learning_rate * grad_W[layer]
                    self.biases_[layer] = self.biases_[layer] - p.learning_rate * grad_b[layer]
            loss = self.loss_and_gradients(Z, y)[0]
            self.loss_history_.append(loss)
            if abs(previous - loss) < p.tol:
                self.converged_ = True
                break
            previous = loss
        return self

    def score(self, X):
        pre, _ = self.forward(self.scaler_.transform(as_matrix(X)))
        return expit(pre[-1][:, 0])
