/** Transport abstraction: one bidirectional line stream per session. */

export interface Transport {
  sendLine(line: string): void;
  onLine(handler: (line: string) => void): void;
  onClose(handler: () => void): void;
  close(): void;
}

/** Reassembles newline-delimited frames from arbitrary chunks. */
export class LineBuffer {
  private buffer = "";

  push(chunk: string): string[] {
    this.buffer += chunk;
    const lines = this.buffer.split("\n");
    this.buffer = lines.pop() ?? "";
    return lines.map((l) => l.trim()).filter((l) => l.length > 0);
  }
}

/** In-memory transport for tests: lines are delivered synchronously. */
export class LoopbackTransport implements Transport {
  sent: string[] = [];
  private lineHandlers: ((line: string) => void)[] = [];
  private closeHandlers: (() => void)[] = [];
  closed = false;

  sendLine(line: string): void {
    this.sent.push(line);
  }

  onLine(handler: (line: string) => void): void {
    this.lineHandlers.push(handler);
  }

  onClose(handler: () => void): void {
    this.closeHandlers.push(handler);
  }

  close(): void {
    this.closed = true;
  }

  /** Test hook: deliver a server line to the console. */
  deliver(line: string): void {
    for (const handler of this.lineHandlers) handler(line);
  }

  /** Test hook: simulate the server dropping the connection. */
  drop(): void {
    for (const handler of this.closeHandlers) handler();
  }
}
