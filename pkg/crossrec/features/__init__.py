from crossrec.features.tokenizer import simple_tokenize
from crossrec.features.vocabulary import Vocabulary, build_vocabulary
from crossrec.features.vectorizer import (
    SparseVec,
    PlaytimeBuckets,
    FeatureSpace,
    vectorize_text,
    vectorize_item,
    to_csr,
)
from crossrec.features.records import (
    ItemRecord,
    UserHistory,
    LabeledExample,
    LogEvent,
    Catalog,
    read_catalog,
    write_catalog,
    read_logs,
    write_logs,
)
