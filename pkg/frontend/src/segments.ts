/**
 * Turn a span report into paintable segments.
 *
 * Spans arrive one record per selected token per tier; a token in both
 * tiers has two records and renders as highlight (the stronger tier).
 * Concatenating the segment texts always reproduces the document exactly.
 */

import { ByteIndex } from "./byteOffsets.js";
import type { SpanRecord } from "./api.js";

export type Tier = "plain" | "underline" | "highlight";

export interface Segment {
  text: string;
  tier: Tier;
}

interface TokenSpan {
  start: number;
  end: number;
  tier: Tier;
}

function collapseByToken(spans: readonly SpanRecord[]): TokenSpan[] {
  const byToken = new Map<number, TokenSpan>();
  for (const span of spans) {
    const existing = byToken.get(span.token_index);
    if (existing === undefined) {
      byToken.set(span.token_index, {
        start: span.byte_start,
        end: span.byte_end,
        tier: span.tier,
      });
    } else if (span.tier === "highlight") {
      existing.tier = "highlight";
    }
  }
  return [...byToken.values()].sort((a, b) => a.start - b.start);
}

export function buildSegments(text: string, spans: readonly SpanRecord[]): Segment[] {
  const index = new ByteIndex(text);
  const segments: Segment[] = [];
  let cursor = 0;
  for (const token of collapseByToken(spans)) {
    if (token.start < cursor) {
      throw new RangeError(`overlapping span at byte ${token.start}`);
    }
    if (token.start > cursor) {
      segments.push({ text: index.slice(cursor, token.start), tier: "plain" });
    }
    segments.push({ text: index.slice(token.start, token.end), tier: token.tier });
    cursor = token.end;
  }
  if (cursor < index.totalBytes) {
    segments.push({ text: index.slice(cursor, index.totalBytes), tier: "plain" });
  }
  return segments;
}

/** Search hits painted as highlight-tier segments over the document. */
export function hitSegments(
  text: string,
  hits: readonly { byte_start: number; byte_end: number }[],
): Segment[] {
  const asSpans: SpanRecord[] = hits.map((hit, i) => ({
    tier: "highlight",
    byte_start: hit.byte_start,
    byte_end: hit.byte_end,
    token_index: i,
    score: 0,
  }));
  asSpans.sort((a, b) => a.byte_start - b.byte_start);
  return buildSegments(text, asSpans);
}
