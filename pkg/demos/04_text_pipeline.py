"""From tokenized documents to clustered vectors.

Builds a toy two-topic corpus, vectorizes it with TF-IDF, shows why the
modulus feature-hashing baseline loses information (two disjoint
documents collide into the same folded vector), reduces dimension with
PCA instead, and clusters the result.

Run: python3 demos/04_text_pipeline.py
"""

import numpy as np

from aqkmeans.kmeans import FitConfig, fit_unsupervised, predict_many
from aqkmeans.preprocess import (
    TokenizedDocument,
    explained_variation,
    feature_hash,
    fit_pca,
    fit_tfidf,
    transform_pca,
    transform_tfidf,
)
from aqkmeans.vecspace import Dataset

pet_docs = [
    ["cat", "dog", "vet", "cat"],
    ["dog", "leash", "walk", "dog", "park"],
    ["cat", "litter", "vet", "kitten"],
    ["kitten", "dog", "park", "walk"],
]
cooking_docs = [
    ["pasta", "sauce", "basil", "pasta"],
    ["oven", "bake", "bread", "flour"],
    ["sauce", "tomato", "basil", "oven"],
    ["flour", "bread", "pasta", "bake"],
]
corpus = [
    TokenizedDocument(id=f"doc{i}", tokens=tuple(tokens),
                      label="pets" if i < 4 else "cooking")
    for i, tokens in enumerate(pet_docs + cooking_docs)
]

tfidf = fit_tfidf(corpus)
matrix = np.array([transform_tfidf(tfidf, d) for d in corpus])
print(f"vocabulary: {tfidf.dim} tokens, vectors are L2-normalized")

# why hashing was rejected: two token-disjoint sentences can fold together
a = feature_hash([1, 1, 1, 0, 0, 0], 3)
b = feature_hash([0, 0, 0, 1, 1, 1], 3)
print(f"hash([1,1,1,0,0,0], 3) = {a.tolist()}")
print(f"hash([0,0,0,1,1,1], 3) = {b.tolist()}  <- identical, info lost")

pca = fit_pca(matrix, n_components=2)
reduced = transform_pca(pca, matrix)
print(f"\nPCA to 2 components explains {explained_variation(pca):.1%} "
      f"of the variance")

data = Dataset(points=reduced, ids=tuple(d.id for d in corpus),
               labels=tuple(d.label for d in corpus))
model = fit_unsupervised(data, FitConfig(k=2, rng_seed=0))
_, predicted = predict_many(model, data.points)
print("\nclustered topics:")
for doc, guess in zip(corpus, predicted):
    print(f"  {doc.id}: true={doc.label:8s} predicted={guess}")
