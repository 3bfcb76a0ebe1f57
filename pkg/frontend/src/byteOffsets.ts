/**
 * Byte-offset addressing for JS strings.
 *
 * The service reports spans as UTF-8 byte offsets into the original
 * document; JS strings index UTF-16 code units. This map converts between
 * the two so the client paints exactly the spans the server scored and
 * never re-tokenizes on its own.
 */

function utf8Length(codePoint: number): number {
  if (codePoint < 0x80) return 1;
  if (codePoint < 0x800) return 2;
  if (codePoint < 0x10000) return 3;
  return 4;
}

export class ByteIndex {
  private byteToUnit = new Map<number, number>();
  readonly totalBytes: number;

  constructor(readonly text: string) {
    let byte = 0;
    let unit = 0;
    for (const ch of text) {
      this.byteToUnit.set(byte, unit);
      byte += utf8Length(ch.codePointAt(0)!);
      unit += ch.length;
    }
    this.byteToUnit.set(byte, unit);
    this.totalBytes = byte;
  }

  /** UTF-16 index for a UTF-8 byte offset (must be a character boundary). */
  charIndex(byteOffset: number): number {
    const unit = this.byteToUnit.get(byteOffset);
    if (unit === undefined) {
      throw new RangeError(`byte offset ${byteOffset} is not a character boundary`);
    }
    return unit;
  }

  /** Substring addressed by byte offsets. */
  slice(byteStart: number, byteEnd: number): string {
    return this.text.slice(this.charIndex(byteStart), this.charIndex(byteEnd));
  }
}
