/**
 * Extract the body text from an exported HTML card.
 *
 * The service marks the body with <div class="card-body">…</div> and
 * wraps tokens only in <u>/<mark>, so stripping tags and decoding the
 * escape entities recovers the original document text exactly. Used to
 * check an export against the on-screen document.
 */

const ENTITIES: Record<string, string> = {
  "&amp;": "&",
  "&lt;": "<",
  "&gt;": ">",
  "&quot;": '"',
  "&#x27;": "'",
  "&#39;": "'",
};

function decodeEntities(text: string): string {
  return text.replace(/&(?:amp|lt|gt|quot|#x27|#39);/g, (entity) => ENTITIES[entity]);
}

export function cardBodyText(html: string): string {
  const match = html.match(/<div class="card-body">([\s\S]*?)<\/div>/);
  if (!match) {
    throw new Error("no card-body container in exported card");
  }
  return decodeEntities(match[1].replace(/<\/?(?:u|mark)>/g, ""));
}
