/** WebSocket wrapper: parse inbound frames, reconnect with backoff. */

import { DriverCommand, ServerFrame, parseServerFrame } from './protocol.js';

export interface SocketCallbacks {
  onFrame: (frame: ServerFrame) => void;
  onOpen: () => void;
  onClose: () => void;
}

export class ControlSocket {
  private ws: WebSocket | null = null;
  private closedByUser = false;
  private retryMs = 500;

  constructor(private url: string, private callbacks: SocketCallbacks) {}

  connect(): void {
    this.closedByUser = false;
    this.ws = new WebSocket(this.url);
    this.ws.onopen = () => {
      this.retryMs = 500;
      this.callbacks.onOpen();
    };
    this.ws.onmessage = (event) => {
      const frame = parseServerFrame(String(event.data));
      if (frame !== null) this.callbacks.onFrame(frame);
    };
    this.ws.onclose = () => {
      this.callbacks.onClose();
      if (!this.closedByUser) {
        setTimeout(() => this.connect(), this.retryMs);
        this.retryMs = Math.min(this.retryMs * 2, 8000);
      }
    };
    this.ws.onerror = () => {
      this.ws?.close();
    };
  }

  send(command: DriverCommand): boolean {
    if (this.ws === null || this.ws.readyState !== WebSocket.OPEN) return false;
    this.ws.send(JSON.stringify(command));
    return true;
  }

  close(): void {
    this.closedByUser = true;
    this.ws?.close();
  }
}

export function defaultSocketUrl(loc: Location): string {
  const scheme = loc.protocol === 'https:' ? 'wss:' : 'ws:';
  return `${scheme}//${loc.host}/ws`;
}
