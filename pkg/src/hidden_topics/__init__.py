"""Document-summary matching through hidden topic vectors of word embeddings."""
from hidden_topics.embeddings import EmbeddingStore, load_embeddings, lookup
from hidden_topics.linalg import BACKEND, top_k_svd
from hidden_topics.preprocess import (
    DocumentMatrix,
    SummaryMatrix,
    TokenMatrix,
    build_matrix,
    default_stoplist,
    remove_stopwords,
    tokenize,
)
from hidden_topics.relevance import (
    RelevanceReport,
    baseline_avg_cosine,
    document_summary_relevance,
    match_score,
    topic_summary_relevance,
    word_topic_relevance,
)
from hidden_topics.topics import (
    TopicModel,
    extract_topics,
    reconstruct_word,
    topic_reconstruction_error,
    topic_words,
    total_reconstruction_error,
)

__version__ = "0.1.0"
