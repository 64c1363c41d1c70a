"""Independent C/NC-value oracle: direct-formula recomputation from raw
token streams, sharing no code with the extractors under test."""

import math

from kwex.candidates import tokenize


def enumerate_chunk_spans(toks, max_len):
    runs, run = [], []
    prev = None
    for t in toks:
        if (t.is_stopword or (prev is not None and t.sentence != prev.sentence)) and run:
            runs.append(run)
            run = []
        if not t.is_stopword:
            run.append(t)
        prev = t
    if run:
        runs.append(run)
    spans = []
    for r in runs:
        if len(r) > max_len:
            spans.append(r)
        for i in range(len(r)):
            for j in range(i, min(i + max_len, len(r))):
                spans.append(r[i : j + 1])
    return spans


def term_statistics(docs, max_len=5, context_window=5, stopwords=frozenset()):
    freq, tokens_of = {}, {}
    cooc, context_cands = {}, {}
    for doc in docs:
        toks = tokenize(doc.text, stopwords)
        texts = [t.text for t in toks]
        stops = [t.is_stopword for t in toks]
        for span in enumerate_chunk_spans(toks, max_len):
            form = " ".join(t.text for t in span)
            freq[form] = freq.get(form, 0) + 1
            tokens_of[form] = tuple(t.text for t in span)
            start, length = span[0].position, len(span)
            lo = max(0, start - context_window)
            hi = min(len(texts), start + length + context_window)
            for pos in range(lo, hi):
                if start <= pos < start + length or stops[pos]:
                    continue
                word = texts[pos]
                cooc.setdefault(form, {})
                cooc[form][word] = cooc[form].get(word, 0) + 1
                context_cands.setdefault(word, set()).add(form)

    nested = {}
    for a, ta in tokens_of.items():
        for b, tb in tokens_of.items():
            if len(ta) < len(tb) and any(
                tb[i : i + len(ta)] == ta for i in range(len(tb) - len(ta) + 1)
            ):
                nested.setdefault(a, set()).add(b)
    return freq, tokens_of, nested, cooc, context_cands


def cvalue_oracle(docs, max_len=5, stopwords=frozenset()):
    freq, tokens_of, nested, _, _ = term_statistics(docs, max_len, stopwords=stopwords)

    def score(a):
        base = math.log2(len(tokens_of[a]) + 1)
        if a not in nested:
            return base * freq[a]
        return base * (freq[a] - sum(freq[b] for b in nested[a]) / len(nested[a]))

    return {a: score(a) for a in freq}


def ncvalue_oracle(docs, alpha, beta, max_len=5, context_window=5, stopwords=frozenset()):
    freq, tokens_of, nested, cooc, context_cands = term_statistics(
        docs, max_len, context_window, stopwords
    )
    total = len(freq)

    def cval(a):
        base = math.log2(len(tokens_of[a]) + 1)
        if a not in nested:
            return base * freq[a]
        return base * (freq[a] - sum(freq[b] for b in nested[a]) / len(nested[a]))

    def score(a):
        ctx = sum(
            count * (len(context_cands[w]) / total) for w, count in cooc.get(a, {}).items()
        )
        return alpha * cval(a) + beta * ctx

    return {a: score(a) for a in freq}
