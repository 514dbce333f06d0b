/** TCP transport for tests and command line tools (not shipped to browsers). */

import * as net from "node:net";

import { Transport } from "./client.js";
import { LineCodec } from "./protocol.js";

export class NodeTcpTransport implements Transport {
  private readonly codec = new LineCodec();
  private readonly lineHandlers: ((line: string) => void)[] = [];
  private readonly closeHandlers: (() => void)[] = [];

  private constructor(private readonly socket: net.Socket) {
    socket.setEncoding("utf8");
    socket.on("data", (chunk: string) => {
      for (const line of this.codec.push(chunk)) {
        for (const h of this.lineHandlers) h(line);
      }
    });
    socket.on("close", () => {
      for (const h of this.closeHandlers) h();
    });
  }

  static connect(host: string, port: number): Promise<NodeTcpTransport> {
    return new Promise((resolve, reject) => {
      const socket = net.createConnection({ host, port }, () =>
        resolve(new NodeTcpTransport(socket)),
      );
      socket.once("error", reject);
    });
  }

  send(line: string): void {
    this.socket.write(line + "\n");
  }

  onLine(handler: (line: string) => void): void {
    this.lineHandlers.push(handler);
  }

  onClose(handler: () => void): void {
    this.closeHandlers.push(handler);
  }

  close(): void {
    this.socket.end();
  }
}
