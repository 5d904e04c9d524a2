#!/usr/bin/env python3
"""Build tiny randomly-initialised checkpoints in HuggingFace layout and record
the reference outputs the C++ inference path must reproduce.

Writes tests/fixtures/checkpoints/<name>/ (config.json, model.safetensors,
tokenizer files) and tests/fixtures/checkpoints/expected.json.

Run from the repository root:  python3 scripts/make_reference_checkpoints.py
"""
import json
import os
import shutil

import numpy as np
import torch
from tokenizers import BertWordPieceTokenizer, ByteLevelBPETokenizer
from transformers import (AddedToken, DistilBertConfig, DistilBertForMaskedLM,
                          DistilBertTokenizer, RobertaConfig,
                          RobertaForQuestionAnswering,
                          RobertaForSequenceClassification, RobertaTokenizer)

OUT = os.path.join("tests", "fixtures", "checkpoints")

CORPUS = [
    "Several demonstrators were injured.",
    "People were killed, wounded and hurt in the attack on the village.",
    "This event involves protests, demonstrations and violence.",
    "Two men were kidnapped by rebels near Gao.",
    "Arrests: police captured a senior commander in Bamako.",
    "The militants clashed with soldiers, and killed one civilian driver.",
    "On 3 January 2020, armed forces regained the town from the group.",
    "Protesters gathered in front of the ministry; police dispersed them.",
    "A café owner's shop was looted and robbed during the riots.",
    "Über 40 people fled after shelling and airstrikes hit the market.",
    "Who was arrested? Who injured people? Who killed people?",
    "The sponsorship deal between the shoes brand and the soccer team was confirmed.",
    "Unknown gunmen abducted 3 students (aged 12-15) at 10:30 [size: no report].",
]

TOKENIZER_PROBES = [
    "Several demonstrators were injured.",
    "  Two   men were\tkidnapped by rebels near Gao.\n",
    "A café owner's shop was looted; it's the rebels' doing!",
    "Über 40 people fled after shelling (2020-05-03).",
    "Battle near [LOC]. [size: no report]",
    "unseenwordpieceszzz and xylophonequux",
]

PAIR_PROBES = [
    ("Several demonstrators were injured.", "People were injured."),
    ("Two men were kidnapped by rebels.", "This event involves kidnapping."),
    ("The sponsorship deal was confirmed.", "This event involves sponsorship."),
]

MASK_PROBES = [
    "Several demonstrators were injured. People were [Z].",
    "Several demonstrators were injured. This event involves [Z].",
    "Two men were kidnapped by rebels. This event event involves [Z].",
]

QA_PROBES = [
    ("Who was arrested?", "Arrests: police captured a senior commander."),
    ("Who injured people?", "Military injured two civilians in the town of Gao."),
    ("Who killed people?", "The militants clashed with soldiers, and killed one civilian driver."),
]

MAX_ANSWER_LEN = 15


def build_wordpiece(path):
    tok = BertWordPieceTokenizer(lowercase=True, strip_accents=None)
    tok.train_from_iterator(CORPUS * 20, vocab_size=400, min_frequency=1,
                            special_tokens=["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"])
    tok.save_model(path)
    return DistilBertTokenizer.from_pretrained(path, do_lower_case=True)


def build_bpe(path):
    tok = ByteLevelBPETokenizer()
    tok.train_from_iterator(CORPUS * 20, vocab_size=420, min_frequency=1,
                            special_tokens=["<s>", "<pad>", "</s>", "<unk>", "<mask>"])
    tok.save_model(path)
    return RobertaTokenizer(vocab=os.path.join(path, "vocab.json"),
                            merges=os.path.join(path, "merges.txt"),
                            mask_token=AddedToken("<mask>", lstrip=True, rstrip=False))


def save_model(model, path):
    model.save_pretrained(path, safe_serialization=True)


def main():
    torch.manual_seed(1234)
    if os.path.isdir(OUT):
        shutil.rmtree(OUT)
    os.makedirs(OUT)
    expected = {}

    # --- DistilBERT masked LM ------------------------------------------------
    mlm_dir = os.path.join(OUT, "tiny-distilbert-mlm")
    os.makedirs(mlm_dir)
    wp = build_wordpiece(mlm_dir)
    cfg = DistilBertConfig(vocab_size=len(wp.get_vocab()), dim=32, n_layers=2, n_heads=4,
                           hidden_dim=64, max_position_embeddings=48, dropout=0.0,
                           attention_dropout=0.0)
    mlm = DistilBertForMaskedLM(cfg).eval()
    with torch.no_grad():
        # make the projector bias non-trivial so the head is fully exercised
        mlm.vocab_projector.bias.normal_(0.0, 0.5)
    save_model(mlm, mlm_dir)

    expected["wordpiece"] = [{"text": t, "ids": wp(t)["input_ids"]} for t in TOKENIZER_PROBES]
    mlm_out = []
    for text in MASK_PROBES:
        hf_text = text.replace("[Z]", wp.mask_token)
        enc = wp(hf_text, return_tensors="pt")
        with torch.no_grad():
            logits = mlm(**enc).logits[0]
        pos = int((enc["input_ids"][0] == wp.mask_token_id).nonzero()[0])
        probs = torch.softmax(logits[pos].double(), dim=-1)
        vals, idx = probs.topk(10)
        mlm_out.append({
            "text": text,
            "ids": enc["input_ids"][0].tolist(),
            "mask_logits": logits[pos].tolist(),
            "top": [[wp.decode([int(i)]), float(v)] for v, i in zip(vals, idx)],
        })
    expected["fill_mask"] = mlm_out

    # left truncation: a long description in front of the template
    long_text = " ".join(["several demonstrators were injured"] * 12) + ". People were [Z]."
    hf_long = long_text.replace("[Z]", wp.mask_token)
    ids = wp(hf_long)["input_ids"][1:-1]
    limit = cfg.max_position_embeddings - 2
    kept = [wp.cls_token_id] + ids[len(ids) - limit:] + [wp.sep_token_id]
    with torch.no_grad():
        logits = mlm(input_ids=torch.tensor([kept])).logits[0]
    pos = kept.index(wp.mask_token_id)
    expected["fill_mask_truncated"] = {"text": long_text, "ids": kept,
                                       "mask_logits": logits[pos].tolist()}

    # --- RoBERTa NLI ---------------------------------------------------------
    nli_dir = os.path.join(OUT, "tiny-roberta-mnli")
    os.makedirs(nli_dir)
    bpe = build_bpe(nli_dir)
    rcfg = dict(vocab_size=len(bpe.get_vocab()), hidden_size=32, num_hidden_layers=2,
                num_attention_heads=4, intermediate_size=64, max_position_embeddings=66,
                type_vocab_size=1, pad_token_id=1, bos_token_id=0, eos_token_id=2,
                hidden_dropout_prob=0.0, attention_probs_dropout_prob=0.0,
                layer_norm_eps=1e-5)
    nli_cfg = RobertaConfig(**rcfg, num_labels=3,
                            id2label={0: "CONTRADICTION", 1: "NEUTRAL", 2: "ENTAILMENT"},
                            label2id={"CONTRADICTION": 0, "NEUTRAL": 1, "ENTAILMENT": 2})
    nli = RobertaForSequenceClassification(nli_cfg).eval()
    with torch.no_grad():
        nli.classifier.out_proj.weight.normal_(0.0, 2.0)
    save_model(nli, nli_dir)

    expected["bpe"] = []
    for t in TOKENIZER_PROBES:
        enc = bpe(t, return_offsets_mapping=True)
        expected["bpe"].append({"text": t, "ids": enc["input_ids"],
                                "offsets": [list(o) for o in enc["offset_mapping"]]})
    expected["bpe_mask"] = []
    for text in MASK_PROBES:
        expected["bpe_mask"].append({"text": text,
                                     "ids": bpe(text.replace("[Z]", "<mask>"))["input_ids"]})
    nli_out = []
    for premise, hypothesis in PAIR_PROBES + [(p, p) for p, _ in PAIR_PROBES]:
        enc = bpe(premise, hypothesis, return_tensors="pt")
        with torch.no_grad():
            logits = nli(**enc).logits[0]
        probs = torch.softmax(logits.double(), dim=-1)
        nli_out.append({"premise": premise, "hypothesis": hypothesis,
                        "ids": enc["input_ids"][0].tolist(),
                        "logits": logits.tolist(), "entail": float(probs[2])})
    expected["entailment"] = nli_out

    # --- RoBERTa extractive QA -----------------------------------------------
    qa_dir = os.path.join(OUT, "tiny-roberta-squad2")
    os.makedirs(qa_dir)
    for f in ("vocab.json", "merges.txt"):
        shutil.copy(os.path.join(nli_dir, f), os.path.join(qa_dir, f))
    qa = RobertaForQuestionAnswering(RobertaConfig(**rcfg)).eval()
    with torch.no_grad():
        qa.qa_outputs.weight.normal_(0.0, 2.0)
    save_model(qa, qa_dir)

    qa_out = []
    for question, context in QA_PROBES:
        enc = bpe(question, context, return_offsets_mapping=True, return_tensors="pt")
        offsets = enc.pop("offset_mapping")[0].tolist()
        seq_ids = enc.sequence_ids(0)
        with torch.no_grad():
            out = qa(**enc)
        start = out.start_logits[0].double().numpy()
        end = out.end_logits[0].double().numpy()
        # classic span decoding: context tokens plus CLS take part in the softmax
        p_mask = np.array([0 if s == 1 else 1 for s in seq_ids])
        p_mask[0] = 0
        undesired = p_mask == 1
        s = np.where(undesired, -10000.0, start)
        e = np.where(undesired, -10000.0, end)
        s = np.exp(s - s.max()); s /= s.sum()
        e = np.exp(e - e.max()); e /= e.sum()
        null_score = float(s[0] * e[0])
        s[0] = e[0] = 0.0
        outer = np.triu(np.outer(s, e))
        outer = np.tril(outer, MAX_ANSWER_LEN - 1)
        ok = np.array([1.0 if seq == 1 else 0.0 for seq in seq_ids])
        outer = outer * ok[:, None] * ok[None, :]
        i, j = np.unravel_index(np.argmax(outer), outer.shape)
        char_start, char_end = offsets[i][0], offsets[j][1]
        qa_out.append({"question": question, "context": context,
                       "ids": enc["input_ids"][0].tolist(),
                       "start_logits": start.tolist(), "end_logits": end.tolist(),
                       "answer": {"text": context[char_start:char_end], "start": char_start,
                                  "end": char_end, "confidence": float(outer[i, j])},
                       "null_score": null_score})
    expected["qa"] = qa_out

    with open(os.path.join(OUT, "expected.json"), "w") as fh:
        json.dump(expected, fh, indent=1)


if __name__ == "__main__":
    main()
